#pragma once

#include "roughcb/model.hpp"

#include <string>
#include <utility>

namespace roughcb
{
    enum class TailKind
    {
        power_law,         // P{X > x} ~ constant * x^{-exponent}
        exponential,       // P{X > x} ~ constant * e^{-rate x}
        exponential_bound, // P{X > x} <= constant * e^{-rate x}; not a two-sided equivalence
    };

    struct TailAsymptote
    {
        TailKind kind = TailKind::power_law;
        double exponent = 0.0; // power-law decay rate; 0 for the exponential kinds
        double rate = 0.0;     // exponential rate; 0 for power laws
        double constant = 0.0;
        std::string regime_note;
    };

    /// v_t(lambda) = lambda (1 - b W(t)) / (1 + lambda W(t)).
    double extinction_exponent(const ModelParams& p, double t, double lambda);

    /// v_t(lambda) by direct quadrature of
    ///   c/Gamma(1-alpha) int_0^inf lambda (W(t) - W(t-x)) / (lambda W(t) + 1) alpha x^{-alpha-1} dx.
    /// Orders of magnitude slower than extinction_exponent; kept as its oracle.
    double extinction_exponent_integral(const ModelParams& p, double t, double lambda);

    /// int_0^inf (W(t) - W(t-x)) alpha x^{-alpha-1} dx by quadrature.
    double increment_integral(const ModelParams& p, double t);

    /// c/Gamma(1-alpha) int_0^t W'(t-x) x^{-alpha} dx by quadrature; equals 1 - b W(t).
    double gap_integral(const ModelParams& p, double t);

    /// lim_{lambda -> inf} v_t(lambda) = (1 - b W(t)) / W(t).
    double vbar(const ModelParams& p, double t);

    /// P{tau > t} = 1 - exp(-zeta vbar(t)).
    double extinction_survival(const ModelParams& p, double zeta, double t);

    /// V_T(lambda) = c Psi(lambda)^alpha.
    double progeny_exponent(const ModelParams& p, double lambda);
    /// E[exp(-lambda T)] = exp(-zeta V_T(lambda)).
    double progeny_laplace(const ModelParams& p, double zeta, double lambda);

    /// E[exp(-lambda X(t))] = exp(-zeta v_t(lambda)).
    double mass_laplace(const ModelParams& p, double zeta, double t, double lambda);

    TailAsymptote extinction_tail_asymptote(const ModelParams& p, double zeta);
    TailAsymptote progeny_tail_asymptote(const ModelParams& p, double zeta);

    /// E[X(t)] = zeta (1 - b W(t)); t = 0 gives zeta.
    double mean_mass(const ModelParams& p, double zeta, double t);

    // Feller branching diffusion dY = -b Y dt + sqrt(2 c Y) dB, the classical
    // baseline the rough process is contrasted with.
    double feller_mass_laplace(double b, double c, double zeta, double t, double lambda);
    double feller_extinction_survival(double b, double c, double zeta, double t);
    double feller_progeny_laplace(double b, double c, double zeta, double lambda);

    struct FellerAsymptotes
    {
        TailAsymptote extinction;
        TailAsymptote progeny;
    };
    FellerAsymptotes feller_asymptotes(double b, double c, double zeta);
}
