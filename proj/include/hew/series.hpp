#ifndef HEW_SERIES_HPP
#define HEW_SERIES_HPP

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hew {

struct SpectralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a state leaves the validity ball (Omega in [1/2,2], |sigma| <= 1,
// |xi| <= 1/2) inside which the reduction is well defined.
struct OutOfBallError : SpectralError {
    using SpectralError::SpectralError;
};

// Pointwise evaluation failure; carries the grid point where it happened.
struct EvalError : SpectralError {
    double tau;
    EvalError(const std::string& msg, double tau_) : SpectralError(msg), tau(tau_) {}
};

struct Discretization {
    int n_modes = 32;
    int oversampling = 4;
    double newton_tol = 1e-12;
    int newton_max_iter = 60;
    double fd_step_scale = 1e-6;

    int grid_size() const {
        int m = oversampling * n_modes;
        return m >= 2 * n_modes + 1 ? m : 2 * n_modes + 1;
    }
    void validate() const;
};

// Real 2pi-periodic function stored as a truncated trigonometric series
//   u(tau) = mean + sum_n a[n-1] cos(n tau) + b[n-1] sin(n tau).
class TrigSeries {
  public:
    double mean = 0.0;
    std::vector<double> a;  // cosine coefficients, a[n-1] for mode n
    std::vector<double> b;  // sine coefficients

    TrigSeries() = default;
    explicit TrigSeries(int n_modes) : a(n_modes, 0.0), b(n_modes, 0.0) {}

    static TrigSeries constant(double c, int n_modes);
    static TrigSeries cosine(int mode, double amplitude, int n_modes);
    static TrigSeries sine(int mode, double amplitude, int n_modes);

    int modes() const { return static_cast<int>(a.size()); }

    double cosc(int n) const { return (n >= 1 && n <= modes()) ? a[n - 1] : 0.0; }
    double sinc(int n) const { return (n >= 1 && n <= modes()) ? b[n - 1] : 0.0; }
    double& cosc(int n) { return a.at(n - 1); }
    double& sinc(int n) { return b.at(n - 1); }

    double eval(double tau) const;

    double l2_norm() const;        // sqrt of the L2(0,2pi) inner product with itself
    double coeff_sup_norm() const; // max over |mean|, |a_n|, |b_n|
    double sup_norm(int n_samples = 0) const;

    bool is_even(double tol = 1e-13) const;
    bool is_odd(double tol = 1e-13) const;

    TrigSeries truncated(int n_modes) const;

    TrigSeries& operator+=(const TrigSeries& o);
    TrigSeries& operator-=(const TrigSeries& o);
    TrigSeries& operator*=(double s);
};

TrigSeries operator+(TrigSeries u, const TrigSeries& v);
TrigSeries operator-(TrigSeries u, const TrigSeries& v);
TrigSeries operator*(double s, TrigSeries u);

// Integral over [0,2pi] and the L2(0,2pi) inner product, both exact for
// truncated series (spectral quadrature).
double integral(const TrigSeries& u);
double inner(const TrigSeries& u, const TrigSeries& v);

// Periodic Hilbert transform: cos(n tau) -> sin(n tau), sin(n tau) -> -cos(n tau),
// constants -> 0. This fixes the sign convention for the whole project; the
// linearized residual formulas depend on it.
TrigSeries hilbert(const TrigSeries& u);

TrigSeries differentiate(const TrigSeries& u);

// Antiderivative vanishing at tau = 0. Input must have zero mean.
TrigSeries antiderivative0(const TrigSeries& u);

TrigSeries project_zero_mean(const TrigSeries& u);

// Uniform collocation grid tau_j = 2 pi j / M.
struct CollocationGrid {
    std::vector<double> samples;

    int size() const { return static_cast<int>(samples.size()); }
    double tau(int j) const { return 2.0 * M_PI * j / size(); }
    double operator[](int j) const { return samples[j]; }
    double& operator[](int j) { return samples[j]; }
};

CollocationGrid to_grid(const TrigSeries& u, int grid_size);
TrigSeries from_grid(std::span<const double> samples, int n_modes);
inline TrigSeries from_grid(const CollocationGrid& g, int n_modes) {
    return from_grid(std::span<const double>(g.samples), n_modes);
}

using PointwiseFn = std::function<double(std::span<const double>)>;

// Samples the inputs on the oversampled grid, applies f pointwise, transforms
// back and truncates to n_modes. Throws EvalError if f returns a non-finite
// value anywhere.
TrigSeries grid_compose(std::span<const TrigSeries> inputs, const PointwiseFn& f,
                        const Discretization& disc);
TrigSeries grid_compose(const TrigSeries& u, const std::function<double(double)>& f,
                        const Discretization& disc);
TrigSeries grid_compose(const TrigSeries& u, const TrigSeries& v,
                        const std::function<double(double, double)>& f,
                        const Discretization& disc);

}  // namespace hew

#endif
