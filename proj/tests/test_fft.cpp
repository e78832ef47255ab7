#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <vector>

#include "optagg/fft.hpp"
#include "optagg/rng.hpp"

using optagg::cdouble;

namespace {

// Independent O(n^2) DFT oracle.
std::vector<cdouble> dft_direct(const std::vector<cdouble>& x) {
    const std::size_t n = x.size();
    std::vector<cdouble> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        cdouble acc(0, 0);
        for (std::size_t k = 0; k < n; ++k) {
            const double ang = -2.0 * optagg::detail::kPi * static_cast<double>(j * k) /
                               static_cast<double>(n);
            acc += x[k] * cdouble(std::cos(ang), std::sin(ang));
        }
        out[j] = acc;
    }
    return out;
}

std::vector<cdouble> random_signal(std::size_t n, std::uint64_t key) {
    const optagg::CounterRng rng(key);
    std::vector<cdouble> x(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto [a, b] = rng.gaussian_pair(k);
        x[k] = cdouble(a, b);
    }
    return x;
}

double max_rel_err(const std::vector<cdouble>& got, const std::vector<cdouble>& want) {
    double scale = 0.0;
    for (const auto& w : want) scale = std::max(scale, std::abs(w));
    double worst = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i)
        worst = std::max(worst, std::abs(got[i] - want[i]) / scale);
    return worst;
}

}  // namespace

TEST_CASE("fft matches the direct DFT on every dispatch path", "[fft]") {
    // pow2, {2,3,5}-smooth, and Bluestein sizes
    for (std::size_t n : {2u, 8u, 64u, 256u, 6u, 15u, 30u, 60u, 360u, 480u, 7u, 97u, 274u}) {
        auto x = random_signal(n, 1000 + n);
        auto want = dft_direct(x);
        auto got = x;
        optagg::fft_forward(got);
        INFO("n = " << n);
        CHECK(max_rel_err(got, want) < 1e-11);
    }
}

TEST_CASE("fft round trip is the identity", "[fft]") {
    for (std::size_t n : {64u, 80u, 96u, 320u, 97u}) {
        auto x = random_signal(n, 7 + n);
        auto y = x;
        optagg::fft_forward(y);
        optagg::fft_inverse(y);
        INFO("n = " << n);
        CHECK(max_rel_err(y, x) < 1e-12);
    }
}

TEST_CASE("fft preserves energy (Parseval)", "[fft]") {
    for (std::size_t n : {128u, 240u, 1280u}) {
        auto x = random_signal(n, 40 + n);
        double pt = 0.0;
        for (const auto& v : x) pt += std::norm(v);
        auto y = x;
        optagg::fft_forward(y);
        double pf = 0.0;
        for (const auto& v : y) pf += std::norm(v);
        pf /= static_cast<double>(n);
        CHECK(std::abs(pf - pt) / pt < 1e-12);
    }
}
