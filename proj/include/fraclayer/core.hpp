#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace fraclayer {

inline constexpr double kPi = 3.14159265358979323846;

struct Atom {
    double s;
    double weight;
};

// Finite atomic probability measure on [s_star, 1]; the mass at s = 1 is
// carried by the classical Laplacian.
class SpectralMeasure {
public:
    SpectralMeasure(std::vector<Atom> atoms, double lap_mass);

    static SpectralMeasure single(double s) { return SpectralMeasure({{s, 1.0}}, 0.0); }

    const std::vector<Atom>& atoms() const { return atoms_; }
    double lap_mass() const { return lap_mass_; }
    double s_star() const { return s_star_; }

private:
    std::vector<Atom> atoms_;
    double lap_mass_;
    double s_star_;
};

enum class PotentialKind { quartic, peierls_nabarro, polynomial };

class Potential {
public:
    static Potential quartic();
    static Potential peierls_nabarro();
    // W(t) = sum_k coeffs[k] t^k
    static Potential polynomial(std::vector<double> coeffs);

    PotentialKind kind() const { return kind_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    std::string name() const;

    double W(double t) const;
    double dW(double t) const;
    double d2W(double t) const;

private:
    Potential(PotentialKind k, std::vector<double> c) : kind_(k), coeffs_(std::move(c)) {}
    PotentialKind kind_;
    std::vector<double> coeffs_;
};

struct CheckEntry {
    std::string name;
    bool passed;
    double worst;
};

struct PotentialReport {
    std::vector<CheckEntry> entries;
    bool all_passed() const;
};

PotentialReport validate_potential(const Potential& p);

// Far-field convention outside the sampled box.
//   layer     -1 on the left, +1 on the right of the monotone axis
//   constant  each side continues its edge value
//   zero      0 outside
//   periodic  values repeat with period 2X
enum class Tail { layer, constant, zero, periodic };

const char* tail_name(Tail t);
Tail tail_from_name(const std::string& name);

class GridFunction;

// One-dimensional profile g with direction a; a 2-D field with this
// background equals g(a.x) outside its box.
struct Background {
    std::shared_ptr<const GridFunction> profile;
    std::array<double, 2> direction{0.0, 1.0};
};

class GridFunction {
public:
    GridFunction() = default;

    // 1-D grid on [-X, X]; periodic grids omit the right endpoint.
    GridFunction(double X, std::size_t n, Tail tail);
    GridFunction(double X, std::vector<double> values, Tail tail);

    // 2-D grid on [-X, X]^2, values indexed [i2 * n + i1].
    static GridFunction make_2d(double X, std::size_t n, Tail tail,
                                std::shared_ptr<const Background> bg = nullptr);

    int dim() const { return dim_; }
    double half_width() const { return X_; }
    std::size_t n() const { return n_; }
    Tail tail() const { return tail_; }
    double h() const { return h_; }
    double x(std::size_t i) const { return -X_ + h_ * static_cast<double>(i); }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& at(std::size_t i1, std::size_t i2) { return values_[i2 * n_ + i1]; }
    double at(std::size_t i1, std::size_t i2) const { return values_[i2 * n_ + i1]; }

    const std::shared_ptr<const Background>& background() const { return bg_; }

    // Exterior values of a 1-D function.
    double left_value() const;
    double right_value() const;

    // Cubic interpolation inside the box, tail convention outside.
    double eval(double x) const;
    // 2-D evaluation; bicubic inside, background (or zero) outside.
    double eval2(double x1, double x2) const;

    bool same_grid(const GridFunction& o) const;

    template <class F>
    static GridFunction sample(double X, std::size_t n, Tail tail, F f) {
        GridFunction g(X, n, tail);
        for (std::size_t i = 0; i < n; ++i) g.values_[i] = f(g.x(i));
        return g;
    }

private:
    int dim_ = 1;
    double X_ = 1.0;
    std::size_t n_ = 0;
    double h_ = 0.0;
    Tail tail_ = Tail::zero;
    std::vector<double> values_;
    std::shared_ptr<const Background> bg_;
};

// Normalization constant of (-Delta)^s in R^n.
double c_ns(int n, double s);

// Energy benchmark R^{n-1}(R^{1-2s}-1)/(1-2s), R^{n-1} log R at s = 1/2.
double phi(int n, double s, double R);

}  // namespace fraclayer
