#include "hew/series.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace hew {

void Discretization::validate() const {
    if (n_modes <= 0) throw SpectralError("discretization: n_modes must be positive");
    if (oversampling < 2) throw SpectralError("discretization: oversampling must be >= 2");
    if (!(newton_tol > 0.0 && newton_tol < 1e-8))
        throw SpectralError("discretization: newton_tol must lie in (0, 1e-8)");
    if (newton_max_iter <= 0) throw SpectralError("discretization: newton_max_iter must be positive");
    if (fd_step_scale <= 0.0) throw SpectralError("discretization: fd_step_scale must be positive");
}

TrigSeries TrigSeries::constant(double c, int n_modes) {
    TrigSeries u(n_modes);
    u.mean = c;
    return u;
}

TrigSeries TrigSeries::cosine(int mode, double amplitude, int n_modes) {
    TrigSeries u(n_modes);
    u.cosc(mode) = amplitude;
    return u;
}

TrigSeries TrigSeries::sine(int mode, double amplitude, int n_modes) {
    TrigSeries u(n_modes);
    u.sinc(mode) = amplitude;
    return u;
}

double TrigSeries::eval(double tau) const {
    double s = mean;
    for (int n = 1; n <= modes(); ++n)
        s += a[n - 1] * std::cos(n * tau) + b[n - 1] * std::sin(n * tau);
    return s;
}

double TrigSeries::l2_norm() const { return std::sqrt(std::max(0.0, inner(*this, *this))); }

double TrigSeries::coeff_sup_norm() const {
    double m = std::abs(mean);
    for (double x : a) m = std::max(m, std::abs(x));
    for (double x : b) m = std::max(m, std::abs(x));
    return m;
}

double TrigSeries::sup_norm(int n_samples) const {
    int m = n_samples > 0 ? n_samples : std::max(4 * modes(), 16);
    auto g = to_grid(*this, m);
    double s = 0.0;
    for (double x : g.samples) s = std::max(s, std::abs(x));
    return s;
}

bool TrigSeries::is_even(double tol) const {
    for (double x : b)
        if (std::abs(x) > tol) return false;
    return true;
}

bool TrigSeries::is_odd(double tol) const {
    if (std::abs(mean) > tol) return false;
    for (double x : a)
        if (std::abs(x) > tol) return false;
    return true;
}

TrigSeries TrigSeries::truncated(int n_modes) const {
    TrigSeries u(n_modes);
    u.mean = mean;
    int m = std::min(n_modes, modes());
    std::copy(a.begin(), a.begin() + m, u.a.begin());
    std::copy(b.begin(), b.begin() + m, u.b.begin());
    return u;
}

TrigSeries& TrigSeries::operator+=(const TrigSeries& o) {
    if (o.modes() > modes()) {
        a.resize(o.a.size(), 0.0);
        b.resize(o.b.size(), 0.0);
    }
    mean += o.mean;
    for (size_t i = 0; i < o.a.size(); ++i) a[i] += o.a[i];
    for (size_t i = 0; i < o.b.size(); ++i) b[i] += o.b[i];
    return *this;
}

TrigSeries& TrigSeries::operator-=(const TrigSeries& o) {
    if (o.modes() > modes()) {
        a.resize(o.a.size(), 0.0);
        b.resize(o.b.size(), 0.0);
    }
    mean -= o.mean;
    for (size_t i = 0; i < o.a.size(); ++i) a[i] -= o.a[i];
    for (size_t i = 0; i < o.b.size(); ++i) b[i] -= o.b[i];
    return *this;
}

TrigSeries& TrigSeries::operator*=(double s) {
    mean *= s;
    for (double& x : a) x *= s;
    for (double& x : b) x *= s;
    return *this;
}

TrigSeries operator+(TrigSeries u, const TrigSeries& v) { return u += v; }
TrigSeries operator-(TrigSeries u, const TrigSeries& v) { return u -= v; }
TrigSeries operator*(double s, TrigSeries u) { return u *= s; }

double integral(const TrigSeries& u) { return 2.0 * M_PI * u.mean; }

double inner(const TrigSeries& u, const TrigSeries& v) {
    double s = 2.0 * M_PI * u.mean * v.mean;
    int m = std::min(u.modes(), v.modes());
    double t = 0.0;
    for (int i = 0; i < m; ++i) t += u.a[i] * v.a[i] + u.b[i] * v.b[i];
    return s + M_PI * t;
}

TrigSeries hilbert(const TrigSeries& u) {
    TrigSeries v(u.modes());
    for (int i = 0; i < u.modes(); ++i) {
        v.a[i] = -u.b[i];
        v.b[i] = u.a[i];
    }
    return v;
}

TrigSeries differentiate(const TrigSeries& u) {
    TrigSeries v(u.modes());
    for (int n = 1; n <= u.modes(); ++n) {
        v.a[n - 1] = n * u.b[n - 1];
        v.b[n - 1] = -n * u.a[n - 1];
    }
    return v;
}

TrigSeries antiderivative0(const TrigSeries& u) {
    if (std::abs(u.mean) > 1e-13 * (1.0 + u.coeff_sup_norm()))
        throw SpectralError("antiderivative0: input must have zero mean");
    TrigSeries v(u.modes());
    for (int n = 1; n <= u.modes(); ++n) {
        v.a[n - 1] = -u.b[n - 1] / n;
        v.b[n - 1] = u.a[n - 1] / n;
        v.mean += u.b[n - 1] / n;  // enforces v(0) = 0
    }
    return v;
}

TrigSeries project_zero_mean(const TrigSeries& u) {
    TrigSeries v = u;
    v.mean = 0.0;
    return v;
}

namespace {

// cos(2 pi r / M) lookup shared by all transforms of the same grid size.
const std::vector<double>& cos_table(int m) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<std::vector<double>>> tables;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = tables[m];
    if (!slot) {
        slot = std::make_unique<std::vector<double>>(m);
        for (int r = 0; r < m; ++r) (*slot)[r] = std::cos(2.0 * M_PI * r / m);
    }
    return *slot;
}

const std::vector<double>& sin_table(int m) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<std::vector<double>>> tables;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = tables[m];
    if (!slot) {
        slot = std::make_unique<std::vector<double>>(m);
        for (int r = 0; r < m; ++r) (*slot)[r] = std::sin(2.0 * M_PI * r / m);
    }
    return *slot;
}

}  // namespace

CollocationGrid to_grid(const TrigSeries& u, int grid_size) {
    const auto& ct = cos_table(grid_size);
    const auto& st = sin_table(grid_size);
    CollocationGrid g;
    g.samples.assign(grid_size, u.mean);
    for (int n = 1; n <= u.modes(); ++n) {
        double an = u.a[n - 1], bn = u.b[n - 1];
        if (an == 0.0 && bn == 0.0) continue;
        long r = 0;
        for (int j = 0; j < grid_size; ++j) {
            g.samples[j] += an * ct[r] + bn * st[r];
            r += n;
            if (r >= grid_size) r -= grid_size * (r / grid_size);
        }
    }
    return g;
}

TrigSeries from_grid(std::span<const double> samples, int n_modes) {
    int m = static_cast<int>(samples.size());
    if (m < 2 * n_modes + 1)
        throw SpectralError("from_grid: grid too coarse for requested mode count");
    const auto& ct = cos_table(m);
    const auto& st = sin_table(m);
    TrigSeries u(n_modes);
    double s = 0.0;
    for (double x : samples) s += x;
    u.mean = s / m;
    for (int n = 1; n <= n_modes; ++n) {
        double ca = 0.0, cb = 0.0;
        long r = 0;
        for (int j = 0; j < m; ++j) {
            ca += samples[j] * ct[r];
            cb += samples[j] * st[r];
            r += n;
            if (r >= m) r -= m * (r / m);
        }
        u.a[n - 1] = 2.0 * ca / m;
        u.b[n - 1] = 2.0 * cb / m;
    }
    return u;
}

TrigSeries grid_compose(std::span<const TrigSeries> inputs, const PointwiseFn& f,
                        const Discretization& disc) {
    int m = disc.grid_size();
    std::vector<CollocationGrid> grids;
    grids.reserve(inputs.size());
    for (const auto& u : inputs) grids.push_back(to_grid(u, m));
    std::vector<double> out(m), args(inputs.size());
    for (int j = 0; j < m; ++j) {
        for (size_t i = 0; i < inputs.size(); ++i) args[i] = grids[i][j];
        double y = f(args);
        if (!std::isfinite(y))
            throw EvalError("grid_compose: non-finite value at tau = " +
                                std::to_string(2.0 * M_PI * j / m),
                            2.0 * M_PI * j / m);
        out[j] = y;
    }
    return from_grid(std::span<const double>(out), disc.n_modes);
}

TrigSeries grid_compose(const TrigSeries& u, const std::function<double(double)>& f,
                        const Discretization& disc) {
    const TrigSeries in[] = {u};
    return grid_compose(std::span<const TrigSeries>(in, 1),
                        [&f](std::span<const double> x) { return f(x[0]); }, disc);
}

TrigSeries grid_compose(const TrigSeries& u, const TrigSeries& v,
                        const std::function<double(double, double)>& f,
                        const Discretization& disc) {
    const TrigSeries in[] = {u, v};
    return grid_compose(std::span<const TrigSeries>(in, 2),
                        [&f](std::span<const double> x) { return f(x[0], x[1]); }, disc);
}

}  // namespace hew
