#include "fft.hpp"

#include <cstring>
#include <mutex>

#include <fftw3.h>

namespace fraclayer::detail {

namespace {

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

struct Buffers {
    double* r = nullptr;
    fftw_complex* c = nullptr;
    Buffers(std::size_t nr, std::size_t nc) {
        r = fftw_alloc_real(nr);
        c = fftw_alloc_complex(nc);
    }
    ~Buffers() {
        fftw_free(r);
        fftw_free(c);
    }
    Buffers(const Buffers&) = delete;
    Buffers& operator=(const Buffers&) = delete;
};

void execute_destroy(fftw_plan p) {
    fftw_execute(p);
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(p);
}

}  // namespace

void rfft(const std::vector<double>& in, std::vector<std::complex<double>>& out) {
    const std::size_t n = in.size();
    const std::size_t nc = n / 2 + 1;
    Buffers b(n, nc);
    fftw_plan p;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        p = fftw_plan_dft_r2c_1d(static_cast<int>(n), b.r, b.c, FFTW_ESTIMATE);
    }
    std::memcpy(b.r, in.data(), n * sizeof(double));
    execute_destroy(p);
    out.resize(nc);
    for (std::size_t k = 0; k < nc; ++k) out[k] = {b.c[k][0], b.c[k][1]};
}

void irfft(const std::vector<std::complex<double>>& in, std::size_t n, std::vector<double>& out) {
    const std::size_t nc = n / 2 + 1;
    Buffers b(n, nc);
    fftw_plan p;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        p = fftw_plan_dft_c2r_1d(static_cast<int>(n), b.c, b.r, FFTW_ESTIMATE);
    }
    for (std::size_t k = 0; k < nc; ++k) {
        b.c[k][0] = in[k].real();
        b.c[k][1] = in[k].imag();
    }
    execute_destroy(p);
    out.resize(n);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = b.r[i] * inv;
}

void rfft2(const std::vector<double>& in, std::size_t n0, std::size_t n1,
           std::vector<std::complex<double>>& out) {
    const std::size_t nc = n0 * (n1 / 2 + 1);
    Buffers b(n0 * n1, nc);
    fftw_plan p;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        p = fftw_plan_dft_r2c_2d(static_cast<int>(n0), static_cast<int>(n1), b.r, b.c, FFTW_ESTIMATE);
    }
    std::memcpy(b.r, in.data(), n0 * n1 * sizeof(double));
    execute_destroy(p);
    out.resize(nc);
    for (std::size_t k = 0; k < nc; ++k) out[k] = {b.c[k][0], b.c[k][1]};
}

void irfft2(const std::vector<std::complex<double>>& in, std::size_t n0, std::size_t n1,
            std::vector<double>& out) {
    const std::size_t nc = n0 * (n1 / 2 + 1);
    Buffers b(n0 * n1, nc);
    fftw_plan p;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        p = fftw_plan_dft_c2r_2d(static_cast<int>(n0), static_cast<int>(n1), b.c, b.r, FFTW_ESTIMATE);
    }
    for (std::size_t k = 0; k < nc; ++k) {
        b.c[k][0] = in[k].real();
        b.c[k][1] = in[k].imag();
    }
    execute_destroy(p);
    out.resize(n0 * n1);
    const double inv = 1.0 / static_cast<double>(n0 * n1);
    for (std::size_t i = 0; i < n0 * n1; ++i) out[i] = b.r[i] * inv;
}

}  // namespace fraclayer::detail
