#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace fraclayer {

// Kernel description in grid-index units t = |z| / h.
struct KernelSpec {
    std::function<double(double)> kernel;  // evaluated on t >= 1 only
    double p = 2.0;                        // first-interval fit g ~ a t^p + b t^q
    double q = 4.0;                        // q <= 0 keeps only the t^p term
    double moment_p = 0.0;                 // int_0^1 t^p kernel(t) dt
    double moment_q = 0.0;
    double tail = 0.0;                     // int_K^inf kernel(t) dt
};

// Product integration of g(t) kernel(t) over [0, K] from samples g(0..K+1),
// assuming g(0) = 0. The first interval uses the two-term fit, later
// intervals a local cubic through four neighbouring samples.
class ProductRule {
public:
    ProductRule(const KernelSpec& spec, std::size_t K);

    std::size_t K() const { return K_; }
    // node weights for the full range, index j = 0..K+1 (entry 0 unused)
    const std::vector<double>& weights() const { return w_; }
    double tail() const { return tail_; }

    // Integral over [a, K] for integer a; q(j) must accept j in [max(a,1)-1, K+1].
    template <class Q>
    double integrate_from(std::size_t a, Q&& q) const {
        double r = 0.0;
        std::size_t k = a;
        if (k == 0) {
            r += first_[0] * q(1) + first_[1] * q(2);
            k = 1;
        }
        for (; k < K_; ++k) {
            const auto& c = iv_[k];
            r += c[0] * q(k - 1) + c[1] * q(k) + c[2] * q(k + 1) + c[3] * q(k + 2);
        }
        return r;
    }

private:
    std::size_t K_;
    std::array<double, 2> first_{};
    std::vector<std::array<double, 4>> iv_;
    std::vector<double> w_;
    double tail_;
};

// Rule for kernel t^{-1-2s}; even = true fits t^2, t^4 on the first
// interval, otherwise t^2, t^3.
ProductRule power_rule(double s, std::size_t K, bool even);

}  // namespace fraclayer
