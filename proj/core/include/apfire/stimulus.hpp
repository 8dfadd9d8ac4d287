#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "apfire/window.hpp"

namespace apfire {

/// One oscillatory term cos_amp·cos(freq·t) + sin_amp·sin(freq·t), freq > 0.
struct TrigTerm {
    double cos_amp = 0.0;
    double sin_amp = 0.0;
    double freq = 1.0;
};

/// Generalized trigonometric polynomial
///
///   f(t) = c0 + sum_j  a_j cos(l_j t) + b_j sin(l_j t)
///
/// with strictly positive, pairwise distinct frequencies l_j. Evaluation,
/// antiderivative and mean are exact closed forms. Immutable after
/// construction; all queries are const and thread-safe.
class TrigPolynomial {
public:
    TrigPolynomial() = default;
    explicit TrigPolynomial(double constant_term, std::vector<TrigTerm> terms = {});

    double value(double t) const;
    /// F(t) = integral of f over [0, t]; F(0) = 0.
    double antiderivative(double t) const;
    double mean() const { return constant_term_; }

    /// Sum of term amplitudes sqrt(a^2 + b^2).
    double amplitude_sum() const;
    /// Certified bound: f(t) >= lower_bound() everywhere (may be <= 0).
    double lower_bound() const { return constant_term_ - amplitude_sum(); }
    /// Certified bound: |f(t)| <= sup_bound() everywhere.
    double sup_bound() const;
    /// Bound on |f'|: sum of l·(|a| + |b|).
    double derivative_bound() const;
    /// Bound on |f''|: sum of l^2·sqrt(a^2 + b^2).
    double second_derivative_bound() const;
    double max_frequency() const;

    /// The polynomial t -> f(t + tau), with the same frequencies.
    TrigPolynomial shifted(double tau) const;
    TrigPolynomial negated() const;

    double constant_term() const { return constant_term_; }
    const std::vector<TrigTerm>& terms() const { return terms_; }

private:
    double constant_term_ = 0.0;
    std::vector<TrigTerm> terms_;
};

/// Piecewise constant function given by breakpoints t_0 < ... < t_m and
/// values v_1..v_m, where v_k holds on [t_{k-1}, t_k). Evaluation is
/// right-continuous at breakpoints. Outside [t_0, t_m] the function either
/// repeats with period t_m - t_0 or takes constant tail values.
///
/// The antiderivative uses precomputed per-segment prefix sums, so it is
/// exact up to rounding. Immutable and thread-safe.
class PiecewiseConstant {
public:
    static PiecewiseConstant periodic(std::vector<double> breakpoints,
                                      std::vector<double> values);
    static PiecewiseConstant with_tails(std::vector<double> breakpoints,
                                        std::vector<double> values,
                                        double left_value, double right_value);

    double value(double t) const;
    double antiderivative(double t) const;
    /// Period average, or the right tail value (the Cesaro limit) for the
    /// tail extension.
    double mean() const;

    double lower_bound() const;
    double sup_bound() const;

    PiecewiseConstant shifted(double tau) const;
    PiecewiseConstant negated() const;

    /// Smallest breakpoint strictly greater than s; +inf when none.
    double next_breakpoint_after(double s) const;
    void append_breakpoints(double lo, double hi, std::vector<double>& out) const;

    /// Maximal interval on which the function vanishes.
    struct Plateau {
        double start;
        double length;
    };
    /// All maximal zero plateaus whose start lies in [lo, hi], sorted.
    /// Plateaus extending to +/- infinity (zero tails) are omitted.
    std::vector<Plateau> zero_plateaus(double lo, double hi) const;

    bool is_periodic() const { return periodic_; }
    double period() const { return breakpoints_.back() - breakpoints_.front(); }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& values() const { return values_; }
    double left_tail() const { return left_tail_; }
    double right_tail() const { return right_tail_; }

private:
    PiecewiseConstant(std::vector<double> breakpoints, std::vector<double> values,
                      bool periodic, double left_value, double right_value);

    /// Index k with breakpoints_[k] <= x < breakpoints_[k+1], clamped.
    std::size_t segment_index(double x) const;
    /// Integral from breakpoints_.front() to x, for x inside [t_0, t_m].
    double prefix_at(double x) const;
    /// Integral from breakpoints_.front() to arbitrary t.
    double raw_integral(double t) const;

    std::vector<double> breakpoints_;
    std::vector<double> values_;
    std::vector<double> prefix_;  // prefix_[k] = integral over [t_0, t_k]
    bool periodic_ = true;
    double left_tail_ = 0.0;
    double right_tail_ = 0.0;
    double anchor_;  // raw_integral(0), subtracted so antiderivative(0) == 0
};

using StimulusPart = std::variant<TrigPolynomial, PiecewiseConstant>;

/// A stimulus: a trigonometric polynomial, a piecewise constant function,
/// or a finite sum of those. Values, antiderivatives and means are the
/// sums over parts. Immutable and safe for concurrent use.
class Stimulus {
public:
    enum class Kind { Trig, Piecewise, Sum };

    Stimulus(TrigPolynomial p);        // NOLINT(google-explicit-constructor)
    Stimulus(PiecewiseConstant p);     // NOLINT(google-explicit-constructor)
    static Stimulus sum(std::vector<StimulusPart> parts);

    Kind kind() const { return kind_; }
    const std::vector<StimulusPart>& parts() const { return parts_; }

    double value(double t) const;
    double antiderivative(double t) const;
    double mean() const;

    /// Certified delta with f >= delta a.e. (sum of per-part bounds).
    double lower_bound() const;
    /// Certified B with |f| <= B a.e.
    double sup_bound() const;

    /// True when no part is piecewise constant.
    bool pure_trig() const;
    /// True when some trig part has at least one oscillatory term.
    bool has_trig_terms() const;
    std::size_t trig_term_count() const;
    double max_trig_frequency() const;
    /// Bound on |f'| of the smooth (trig) content; PC parts contribute 0.
    double smooth_derivative_bound() const;
    double smooth_second_derivative_bound() const;

    Stimulus shifted(double tau) const;
    Stimulus negated() const;

    /// Smallest PC breakpoint strictly greater than s; +inf when none.
    double next_breakpoint_after(double s) const;
    /// Merged sorted unique PC breakpoints inside [lo, hi].
    std::vector<double> breakpoints_within(double lo, double hi) const;
    /// Bound on |f| over [s, next_breakpoint_after(s)): trig sup bounds
    /// plus the (constant) PC values at s. Exact for PC-only stimuli.
    double piece_bound_at(double s) const;

private:
    Stimulus(Kind kind, std::vector<StimulusPart> parts);

    Kind kind_;
    std::vector<StimulusPart> parts_;
};

// Spec-level operations as free functions.

double evaluate(const Stimulus& f, double t);
double antiderivative(const Stimulus& f, double t);
double mean(const Stimulus& f);
double certified_lower_bound(const Stimulus& f);

/// f - g as a stimulus (concatenates f's parts with g's negated parts).
Stimulus difference(const Stimulus& f, const Stimulus& g);

/// f(.+tau) - f(.) with trig parts merged term-by-term, so that amplitude
/// bounds of the difference are tight (they vanish as tau approaches a
/// period). Used by the shift metrics below.
Stimulus shift_difference(const Stimulus& f, double tau);

/// Integral of |g| over [a, b] with certified absolute error <= tol.
/// Exact for piecewise constant g; for trig content, sign changes are
/// bisected and the pieces integrate via the closed-form antiderivative.
double abs_integral(const Stimulus& g, double a, double b, double tol);

/// Max of |f - g| over the window grid plus all PC breakpoints of either
/// stimulus inside the window. Exact for PC pairs; a lower bound of the
/// true sup otherwise.
double sup_distance(const Stimulus& f, const Stimulus& g, const Window& w);

/// sup over grid t of integral_t^{t+1} |f(u + tau) - f(u)| du
/// (Stepanov distance with r = 1, p = 1, restricted to the window grid).
/// Inner integrals carry absolute error <= 1e-6.
double stepanov_shift_distance(const Stimulus& f, double tau, const Window& w);

}  // namespace apfire
