#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace fraclayer::detail {

// Thin wrappers over FFTW with aligned buffers and serialized planning.
void rfft(const std::vector<double>& in, std::vector<std::complex<double>>& out);
void irfft(const std::vector<std::complex<double>>& in, std::size_t n, std::vector<double>& out);
void rfft2(const std::vector<double>& in, std::size_t n0, std::size_t n1,
           std::vector<std::complex<double>>& out);
void irfft2(const std::vector<std::complex<double>>& in, std::size_t n0, std::size_t n1,
            std::vector<double>& out);

}  // namespace fraclayer::detail
