#include "fraclayer/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fraclayer/errors.hpp"
#include "fraclayer/special.hpp"

namespace fraclayer {

SpectralMeasure::SpectralMeasure(std::vector<Atom> atoms, double lap_mass)
    : atoms_(std::move(atoms)), lap_mass_(lap_mass) {
    if (!(lap_mass_ >= 0.0) || lap_mass_ > 1.0 + 1e-12)
        throw ConfigError("measure: lap_mass must lie in [0, 1]");
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.s < b.s; });
    double total = lap_mass_;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const Atom& a = atoms_[i];
        if (!std::isfinite(a.s) || !std::isfinite(a.weight))
            throw ConfigError("measure: non-finite atom");
        if (a.s >= 1.0)
            throw ConfigError("measure: atom at s >= 1; put that mass in lap_mass");
        if (a.s <= 0.0) throw ConfigError("measure: atom s must be positive");
        if (!(a.weight > 0.0)) throw ConfigError("measure: atom weights must be positive");
        if (i > 0 && atoms_[i - 1].s == a.s) throw ConfigError("measure: duplicate atom s");
        total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "measure: total mass " << total << " differs from 1";
        throw ConfigError(os.str());
    }
    if (atoms_.empty() && lap_mass_ < 1.0) throw ConfigError("measure: no atoms");
    s_star_ = atoms_.empty() ? 1.0 : atoms_.front().s;
}

Potential Potential::quartic() { return Potential(PotentialKind::quartic, {}); }

Potential Potential::peierls_nabarro() { return Potential(PotentialKind::peierls_nabarro, {}); }

Potential Potential::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) throw ConfigError("potential: empty polynomial");
    return Potential(PotentialKind::polynomial, std::move(coeffs));
}

std::string Potential::name() const {
    switch (kind_) {
        case PotentialKind::quartic: return "quartic";
        case PotentialKind::peierls_nabarro: return "peierls_nabarro";
        case PotentialKind::polynomial: return "polynomial";
    }
    return "unknown";
}

double Potential::W(double t) const {
    switch (kind_) {
        case PotentialKind::quartic: {
            const double a = 1.0 - t * t;
            return 0.25 * a * a;
        }
        case PotentialKind::peierls_nabarro:
            return (1.0 + std::cos(kPi * t)) / (kPi * kPi);
        case PotentialKind::polynomial: {
            double r = 0.0;
            for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * t + *it;
            return r;
        }
    }
    return 0.0;
}

double Potential::dW(double t) const {
    switch (kind_) {
        case PotentialKind::quartic: return t * t * t - t;
        case PotentialKind::peierls_nabarro: return -std::sin(kPi * t) / kPi;
        case PotentialKind::polynomial: {
            double r = 0.0;
            for (std::size_t k = coeffs_.size(); k-- > 1;) r = r * t + static_cast<double>(k) * coeffs_[k];
            return r;
        }
    }
    return 0.0;
}

double Potential::d2W(double t) const {
    switch (kind_) {
        case PotentialKind::quartic: return 3.0 * t * t - 1.0;
        case PotentialKind::peierls_nabarro: return -std::cos(kPi * t);
        case PotentialKind::polynomial: {
            double r = 0.0;
            for (std::size_t k = coeffs_.size(); k-- > 2;)
                r = r * t + static_cast<double>(k * (k - 1)) * coeffs_[k];
            return r;
        }
    }
    return 0.0;
}

bool PotentialReport::all_passed() const {
    return std::all_of(entries.begin(), entries.end(), [](const CheckEntry& e) { return e.passed; });
}

PotentialReport validate_potential(const Potential& p) {
    PotentialReport rep;
    const double wells = std::max(std::abs(p.W(-1.0)), std::abs(p.W(1.0)));
    rep.entries.push_back({"wells_at_pm1", wells <= 1e-12, wells});

    double min_inside = INFINITY;
    for (int k = 0; k < 201; ++k) {
        const double t = -1.0 + 2.0 * (k + 1) / 202.0;
        min_inside = std::min(min_inside, p.W(t));
    }
    rep.entries.push_back({"positive_inside", min_inside > 0.0, std::max(0.0, -min_inside)});

    constexpr double fd = 1e-5;
    double worst_d = 0.0;
    for (int k = 0; k <= 300; ++k) {
        const double t = -1.5 + 0.01 * k;
        const double num = (p.W(t + fd) - p.W(t - fd)) / (2.0 * fd);
        worst_d = std::max(worst_d, std::abs(num - p.dW(t)));
    }
    rep.entries.push_back({"derivative_consistent", worst_d <= 1e-6, worst_d});
    return rep;
}

const char* tail_name(Tail t) {
    switch (t) {
        case Tail::layer: return "layer";
        case Tail::constant: return "constant";
        case Tail::zero: return "zero";
        case Tail::periodic: return "periodic";
    }
    return "?";
}

Tail tail_from_name(const std::string& name) {
    if (name == "layer") return Tail::layer;
    if (name == "constant") return Tail::constant;
    if (name == "zero") return Tail::zero;
    if (name == "periodic") return Tail::periodic;
    throw ConfigError("unknown tail '" + name + "'");
}

GridFunction::GridFunction(double X, std::size_t n, Tail tail) : X_(X), n_(n), tail_(tail) {
    if (!(X > 0.0)) throw DomainError("grid: half width must be positive");
    if (n < 4) throw DomainError("grid: need at least 4 points");
    h_ = tail == Tail::periodic ? 2.0 * X / static_cast<double>(n) : 2.0 * X / static_cast<double>(n - 1);
    values_.assign(n, 0.0);
}

GridFunction::GridFunction(double X, std::vector<double> values, Tail tail)
    : GridFunction(X, values.size(), tail) {
    values_ = std::move(values);
}

GridFunction GridFunction::make_2d(double X, std::size_t n, Tail tail,
                                   std::shared_ptr<const Background> bg) {
    if (tail == Tail::periodic || tail == Tail::constant)
        throw DomainError("grid: 2-D fields support layer and zero tails");
    if (tail == Tail::layer && !bg) throw DomainError("grid: 2-D layer tail needs a background profile");
    GridFunction g(X, n, tail);
    g.dim_ = 2;
    g.values_.assign(n * n, 0.0);
    g.bg_ = std::move(bg);
    return g;
}

double GridFunction::left_value() const {
    switch (tail_) {
        case Tail::layer: return -1.0;
        case Tail::constant: return values_.front();
        case Tail::zero: return 0.0;
        case Tail::periodic: break;
    }
    throw DomainError("grid: periodic functions have no exterior value");
}

double GridFunction::right_value() const {
    switch (tail_) {
        case Tail::layer: return 1.0;
        case Tail::constant: return values_[n_ - 1];
        case Tail::zero: return 0.0;
        case Tail::periodic: break;
    }
    throw DomainError("grid: periodic functions have no exterior value");
}

namespace {

void cubic_weights(double t, double w[4]) {
    // nodes at -1, 0, 1, 2
    w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
    w[1] = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    w[2] = -(t + 1.0) * t * (t - 2.0) / 2.0;
    w[3] = (t + 1.0) * t * (t - 1.0) / 6.0;
}

// Left stencil node and local coordinate for a position given in index units.
void stencil(double pos, std::size_t n, long& base, double& t) {
    long i = static_cast<long>(std::floor(pos));
    i = std::clamp<long>(i, 1, static_cast<long>(n) - 3);
    base = i - 1;
    t = pos - static_cast<double>(i);
}

}  // namespace

double GridFunction::eval(double xq) const {
    if (tail_ == Tail::periodic) {
        const double pos = (xq + X_) / h_;
        const long i = static_cast<long>(std::floor(pos));
        const double t = pos - static_cast<double>(i);
        double w[4];
        cubic_weights(t, w);
        double r = 0.0;
        const long n = static_cast<long>(n_);
        for (int k = 0; k < 4; ++k) {
            long j = ((i - 1 + k) % n + n) % n;
            r += w[k] * values_[static_cast<std::size_t>(j)];
        }
        return r;
    }
    if (xq < -X_) return left_value();
    if (xq > X_) return right_value();
    long base;
    double t;
    stencil((xq + X_) / h_, n_, base, t);
    double w[4];
    cubic_weights(t, w);
    double r = 0.0;
    for (int k = 0; k < 4; ++k) r += w[k] * values_[static_cast<std::size_t>(base + k)];
    return r;
}

double GridFunction::eval2(double x1, double x2) const {
    if (dim_ != 2) throw DomainError("grid: eval2 on a 1-D function");
    if (std::abs(x1) > X_ || std::abs(x2) > X_) {
        if (!bg_) return 0.0;
        return bg_->profile->eval(bg_->direction[0] * x1 + bg_->direction[1] * x2);
    }
    long b1, b2;
    double t1, t2;
    stencil((x1 + X_) / h_, n_, b1, t1);
    stencil((x2 + X_) / h_, n_, b2, t2);
    double w1[4], w2[4];
    cubic_weights(t1, w1);
    cubic_weights(t2, w2);
    double r = 0.0;
    for (int k2 = 0; k2 < 4; ++k2) {
        double row = 0.0;
        for (int k1 = 0; k1 < 4; ++k1)
            row += w1[k1] * at(static_cast<std::size_t>(b1 + k1), static_cast<std::size_t>(b2 + k2));
        r += w2[k2] * row;
    }
    return r;
}

bool GridFunction::same_grid(const GridFunction& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && X_ == o.X_ &&
           (tail_ == Tail::periodic) == (o.tail_ == Tail::periodic);
}

double c_ns(int n, double s) {
    if (n < 1) throw DomainError("c_ns: dimension must be >= 1");
    if (!(s > 0.0 && s < 1.0)) throw DomainError("c_ns: s must lie in (0, 1)");
    const double nd = static_cast<double>(n);
    return std::pow(kPi, -0.5 * nd) * std::pow(2.0, 2.0 * s) * gamma_fn(0.5 * (nd + 2.0 * s)) /
           gamma_fn(2.0 - s) * s * (1.0 - s);
}

double phi(int n, double s, double R) {
    if (!(R >= 2.0)) throw DomainError("phi: R must be >= 2");
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("phi: s must lie in (0, 1]");
    const double L = std::log(R);
    const double eps = 1.0 - 2.0 * s;
    const double core = eps == 0.0 ? L : std::expm1(eps * L) / eps;
    return std::pow(R, n - 1) * core;
}

}  // namespace fraclayer
