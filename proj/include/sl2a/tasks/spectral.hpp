#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <fftw3.h>

#include "sl2a/numerics/matrix.hpp"
#include "sl2a/tasks/coords.hpp"

namespace sl2a {

using Complex = std::complex<double>;

/// Forward DFT, X[k] = sum_j x[j] exp(-2 pi i jk/N), all N bins (FFTW).
inline std::vector<Complex> dft(std::span<const double> x)
{
    const std::size_t n = x.size();
    if (n == 0) return {};
    const int len = static_cast<int>(n);
    auto* in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    for (std::size_t i = 0; i < n; ++i) {
        in[i][0] = x[i];
        in[i][1] = 0.0;
    }
    fftw_plan plan = fftw_plan_dft_1d(len, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    std::vector<Complex> result(n);
    for (std::size_t i = 0; i < n; ++i) result[i] = {out[i][0], out[i][1]};
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
    return result;
}

/// Samples and target frequencies of the rounded-sines probe.
struct SpectralProbe {
    std::size_t samples = 300;
    double lo = -1.0;
    double hi = 1.0;
    std::vector<double> frequencies{3.0 * std::numbers::pi, 5.0 * std::numbers::pi, 7.0 * std::numbers::pi,
                                    9.0 * std::numbers::pi};

    Matrix coords() const { return linspace(lo, hi, samples); }

    double spacing() const { return (hi - lo) / static_cast<double>(samples - 1); }

    /// DFT bin nearest to angular frequency `omega` (radians per unit x).
    std::size_t bin(double omega) const
    {
        const double cycles = omega / (2.0 * std::numbers::pi) * static_cast<double>(samples) * spacing();
        return static_cast<std::size_t>(std::llround(cycles));
    }
};

/// "error_<k>pi" for omega = k pi, with k printed to at most 6 significant digits.
inline std::string frequency_label(double omega)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "error_%.6gpi", omega / std::numbers::pi);
    return buf;
}

/// 2 R((sin 3 pi x + sin 5 pi x + sin 7 pi x + sin 9 pi x) / 2), with R
/// rounding half away from zero.
inline double spectral_probe_value(double x)
{
    const double pi = std::numbers::pi;
    const double s = std::sin(3.0 * pi * x) + std::sin(5.0 * pi * x) + std::sin(7.0 * pi * x) + std::sin(9.0 * pi * x);
    return 2.0 * std::round(s / 2.0);
}

inline Matrix spectral_probe_signal(const Matrix& x)
{
    Matrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::abs(x.data()[i]) > 1.0) throw DomainError("spectral_probe_signal: x outside [-1, 1]");
        out.data()[i] = spectral_probe_value(x.data()[i]);
    }
    return out;
}

/// |F[pred](k) - F[ref](k)| / |F[ref](k)| at the bin k nearest each of
/// `probe.frequencies`. Throws DomainError when |F[ref](k)| < 1e-12.
inline std::vector<double> frequency_error(std::span<const double> pred, std::span<const double> ref,
                                           const SpectralProbe& probe)
{
    if (pred.size() != ref.size()) throw ShapeError("frequency_error: length mismatch");
    if (ref.size() != probe.samples) throw ShapeError("frequency_error: signal length does not match probe");
    const auto fp = dft(pred);
    const auto fr = dft(ref);
    std::vector<double> out;
    for (double omega : probe.frequencies) {
        const std::size_t k = probe.bin(omega);
        if (k >= ref.size()) throw DomainError("frequency_error: frequency beyond the sampled band");
        const double denom = std::abs(fr[k]);
        if (denom < 1e-12) throw DomainError("frequency_error: reference has no energy at the probed bin");
        out.push_back(std::abs(fp[k] - fr[k]) / denom);
    }
    return out;
}

}  // namespace sl2a
