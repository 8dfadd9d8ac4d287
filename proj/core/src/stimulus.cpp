#include "apfire/stimulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "apfire/errors.hpp"

namespace apfire {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double hypot_amp(const TrigTerm& term) {
    return std::hypot(term.cos_amp, term.sin_amp);
}

}  // namespace

// ---------------------------------------------------------------------------
// TrigPolynomial

TrigPolynomial::TrigPolynomial(double constant_term, std::vector<TrigTerm> terms)
    : constant_term_(constant_term), terms_(std::move(terms)) {
    for (const auto& term : terms_) {
        if (!(term.freq > 0.0) || !std::isfinite(term.freq))
            throw ParseError("trig term frequency must be finite and > 0, got " +
                             std::to_string(term.freq));
        if (!std::isfinite(term.cos_amp) || !std::isfinite(term.sin_amp))
            throw ParseError("trig term amplitudes must be finite");
    }
    std::vector<double> freqs;
    freqs.reserve(terms_.size());
    for (const auto& term : terms_) freqs.push_back(term.freq);
    std::sort(freqs.begin(), freqs.end());
    if (std::adjacent_find(freqs.begin(), freqs.end()) != freqs.end())
        throw ParseError("trig term frequencies must be pairwise distinct");
}

double TrigPolynomial::value(double t) const {
    double v = constant_term_;
    for (const auto& term : terms_)
        v += term.cos_amp * std::cos(term.freq * t) + term.sin_amp * std::sin(term.freq * t);
    return v;
}

double TrigPolynomial::antiderivative(double t) const {
    double v = constant_term_ * t;
    for (const auto& term : terms_)
        v += term.cos_amp * std::sin(term.freq * t) / term.freq +
             term.sin_amp * (1.0 - std::cos(term.freq * t)) / term.freq;
    return v;
}

double TrigPolynomial::amplitude_sum() const {
    double s = 0.0;
    for (const auto& term : terms_) s += hypot_amp(term);
    return s;
}

double TrigPolynomial::sup_bound() const { return std::abs(constant_term_) + amplitude_sum(); }

double TrigPolynomial::derivative_bound() const {
    double s = 0.0;
    for (const auto& term : terms_)
        s += term.freq * (std::abs(term.cos_amp) + std::abs(term.sin_amp));
    return s;
}

double TrigPolynomial::second_derivative_bound() const {
    double s = 0.0;
    for (const auto& term : terms_) s += term.freq * term.freq * hypot_amp(term);
    return s;
}

double TrigPolynomial::max_frequency() const {
    double m = 0.0;
    for (const auto& term : terms_) m = std::max(m, term.freq);
    return m;
}

TrigPolynomial TrigPolynomial::shifted(double tau) const {
    std::vector<TrigTerm> shifted_terms;
    shifted_terms.reserve(terms_.size());
    for (const auto& term : terms_) {
        const double c = std::cos(term.freq * tau);
        const double s = std::sin(term.freq * tau);
        shifted_terms.push_back({term.cos_amp * c + term.sin_amp * s,
                                 term.sin_amp * c - term.cos_amp * s, term.freq});
    }
    return TrigPolynomial(constant_term_, std::move(shifted_terms));
}

TrigPolynomial TrigPolynomial::negated() const {
    std::vector<TrigTerm> neg = terms_;
    for (auto& term : neg) {
        term.cos_amp = -term.cos_amp;
        term.sin_amp = -term.sin_amp;
    }
    return TrigPolynomial(-constant_term_, std::move(neg));
}

// ---------------------------------------------------------------------------
// PiecewiseConstant

PiecewiseConstant::PiecewiseConstant(std::vector<double> breakpoints,
                                     std::vector<double> values, bool periodic,
                                     double left_value, double right_value)
    : breakpoints_(std::move(breakpoints)),
      values_(std::move(values)),
      periodic_(periodic),
      left_tail_(left_value),
      right_tail_(right_value) {
    if (values_.empty()) throw ParseError("piecewise: need at least one segment");
    if (breakpoints_.size() != values_.size() + 1)
        throw ParseError("piecewise: breakpoints must number values + 1 (got " +
                         std::to_string(breakpoints_.size()) + " breakpoints, " +
                         std::to_string(values_.size()) + " values)");
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
        if (!(breakpoints_[i] < breakpoints_[i + 1]))
            throw ParseError("piecewise: breakpoints must be strictly increasing at index " +
                             std::to_string(i + 1));
    for (double b : breakpoints_)
        if (!std::isfinite(b)) throw ParseError("piecewise: breakpoints must be finite");
    for (double v : values_)
        if (!std::isfinite(v)) throw ParseError("piecewise: values must be finite");
    if (!std::isfinite(left_tail_) || !std::isfinite(right_tail_))
        throw ParseError("piecewise: tail values must be finite");

    prefix_.resize(breakpoints_.size());
    prefix_[0] = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k)
        prefix_[k + 1] = prefix_[k] + values_[k] * (breakpoints_[k + 1] - breakpoints_[k]);

    anchor_ = 0.0;
    anchor_ = raw_integral(0.0);
}

PiecewiseConstant PiecewiseConstant::periodic(std::vector<double> breakpoints,
                                              std::vector<double> values) {
    return PiecewiseConstant(std::move(breakpoints), std::move(values), true, 0.0, 0.0);
}

PiecewiseConstant PiecewiseConstant::with_tails(std::vector<double> breakpoints,
                                                std::vector<double> values,
                                                double left_value, double right_value) {
    return PiecewiseConstant(std::move(breakpoints), std::move(values), false, left_value,
                             right_value);
}

std::size_t PiecewiseConstant::segment_index(double x) const {
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    if (it == breakpoints_.begin()) return 0;
    std::size_t idx = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    return std::min(idx, values_.size() - 1);
}

double PiecewiseConstant::value(double t) const {
    const double lo = breakpoints_.front();
    const double hi = breakpoints_.back();
    if (periodic_) {
        const double T = hi - lo;
        double q = std::floor((t - lo) / T);
        double r = t - q * T;
        if (r < lo) r += T;
        if (r >= hi) r -= T;
        if (r < lo) r = lo;  // rounding guard
        return values_[segment_index(r)];
    }
    if (t < lo) return left_tail_;
    if (t >= hi) return right_tail_;
    return values_[segment_index(t)];
}

double PiecewiseConstant::prefix_at(double x) const {
    const std::size_t k = segment_index(x);
    return prefix_[k] + values_[k] * (x - breakpoints_[k]);
}

double PiecewiseConstant::raw_integral(double t) const {
    const double lo = breakpoints_.front();
    const double hi = breakpoints_.back();
    if (periodic_) {
        const double T = hi - lo;
        double q = std::floor((t - lo) / T);
        double r = t - q * T;
        if (r < lo) {
            r += T;
            q -= 1.0;
        }
        if (r >= hi) {
            r -= T;
            q += 1.0;
        }
        if (r < lo) r = lo;
        return q * prefix_.back() + prefix_at(r);
    }
    if (t < lo) return left_tail_ * (t - lo);
    if (t > hi) return prefix_.back() + right_tail_ * (t - hi);
    return prefix_at(t);
}

double PiecewiseConstant::antiderivative(double t) const { return raw_integral(t) - anchor_; }

double PiecewiseConstant::mean() const {
    if (periodic_) return prefix_.back() / period();
    return right_tail_;
}

double PiecewiseConstant::lower_bound() const {
    double m = *std::min_element(values_.begin(), values_.end());
    if (!periodic_) m = std::min({m, left_tail_, right_tail_});
    return m;
}

double PiecewiseConstant::sup_bound() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    if (!periodic_) m = std::max({m, std::abs(left_tail_), std::abs(right_tail_)});
    return m;
}

PiecewiseConstant PiecewiseConstant::shifted(double tau) const {
    std::vector<double> bp = breakpoints_;
    for (double& b : bp) b -= tau;
    return PiecewiseConstant(std::move(bp), values_, periodic_, left_tail_, right_tail_);
}

PiecewiseConstant PiecewiseConstant::negated() const {
    std::vector<double> neg = values_;
    for (double& v : neg) v = -v;
    return PiecewiseConstant(breakpoints_, std::move(neg), periodic_, -left_tail_, -right_tail_);
}

double PiecewiseConstant::next_breakpoint_after(double s) const {
    const double lo = breakpoints_.front();
    const double hi = breakpoints_.back();
    if (!periodic_) {
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s);
        return it == breakpoints_.end() ? kInf : *it;
    }
    const double T = hi - lo;
    double q = std::floor((s - lo) / T);
    // candidate breakpoints live at breakpoints_[i] + k*T; probe the period
    // containing s and the next one to absorb rounding at the seam.
    for (double shift : {q * T, (q + 1.0) * T}) {
        for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
            const double cand = breakpoints_[i] + shift;
            if (cand > s) return cand;
        }
        const double seam = hi + shift;
        if (seam > s) return seam;
    }
    return s + T;  // unreachable in practice
}

void PiecewiseConstant::append_breakpoints(double lo, double hi,
                                           std::vector<double>& out) const {
    if (!periodic_) {
        for (double b : breakpoints_)
            if (b >= lo && b <= hi) out.push_back(b);
        return;
    }
    double b = next_breakpoint_after(std::nextafter(lo, -kInf));
    while (b <= hi) {
        if (b >= lo) out.push_back(b);
        b = next_breakpoint_after(b);
    }
}

std::vector<PiecewiseConstant::Plateau> PiecewiseConstant::zero_plateaus(double lo,
                                                                         double hi) const {
    std::vector<Plateau> base;  // plateau starts within one pattern copy
    const std::size_t m = values_.size();
    if (periodic_) {
        bool all_zero = true;
        for (double v : values_)
            if (v != 0.0) all_zero = false;
        if (all_zero) return {};  // identically zero: no firing map to analyze

        // runs of zero segments, cyclically
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t prev = (i + m - 1) % m;
            if (values_[i] != 0.0 || values_[prev] == 0.0) continue;
            // run starts at segment i
            double len = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const std::size_t k = (i + j) % m;
                if (values_[k] != 0.0) break;
                len += breakpoints_[k + 1] - breakpoints_[k];
            }
            base.push_back({breakpoints_[i], len});
        }
        std::vector<Plateau> out;
        const double T = period();
        for (const auto& p : base) {
            double q = std::ceil((lo - p.start) / T - 1e-12);
            for (double start = p.start + q * T; start <= hi; start += T)
                if (start >= lo) out.push_back({start, p.length});
        }
        std::sort(out.begin(), out.end(),
                  [](const Plateau& a, const Plateau& b) { return a.start < b.start; });
        return out;
    }

    std::vector<Plateau> out;
    std::size_t i = 0;
    while (i < m) {
        if (values_[i] != 0.0) {
            ++i;
            continue;
        }
        std::size_t j = i;
        double len = 0.0;
        while (j < m && values_[j] == 0.0) {
            len += breakpoints_[j + 1] - breakpoints_[j];
            ++j;
        }
        const bool touches_left_inf = (i == 0 && left_tail_ == 0.0);
        const bool touches_right_inf = (j == m && right_tail_ == 0.0);
        if (!touches_left_inf && !touches_right_inf) {
            const double start = breakpoints_[i];
            if (start >= lo && start <= hi) out.push_back({start, len});
        }
        i = j;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Stimulus

Stimulus::Stimulus(TrigPolynomial p) : kind_(Kind::Trig) { parts_.emplace_back(std::move(p)); }

Stimulus::Stimulus(PiecewiseConstant p) : kind_(Kind::Piecewise) {
    parts_.emplace_back(std::move(p));
}

Stimulus::Stimulus(Kind kind, std::vector<StimulusPart> parts)
    : kind_(kind), parts_(std::move(parts)) {}

Stimulus Stimulus::sum(std::vector<StimulusPart> parts) {
    if (parts.empty()) throw ParseError("sum: needs at least one part");
    return Stimulus(Kind::Sum, std::move(parts));
}

namespace {

template <typename F>
double accumulate_parts(const std::vector<StimulusPart>& parts, F&& f) {
    double acc = 0.0;
    for (const auto& part : parts) acc += std::visit(f, part);
    return acc;
}

}  // namespace

double Stimulus::value(double t) const {
    return accumulate_parts(parts_, [t](const auto& p) { return p.value(t); });
}

double Stimulus::antiderivative(double t) const {
    return accumulate_parts(parts_, [t](const auto& p) { return p.antiderivative(t); });
}

double Stimulus::mean() const {
    return accumulate_parts(parts_, [](const auto& p) { return p.mean(); });
}

double Stimulus::lower_bound() const {
    return accumulate_parts(parts_, [](const auto& p) { return p.lower_bound(); });
}

double Stimulus::sup_bound() const {
    return accumulate_parts(parts_, [](const auto& p) { return p.sup_bound(); });
}

bool Stimulus::pure_trig() const {
    for (const auto& part : parts_)
        if (!std::holds_alternative<TrigPolynomial>(part)) return false;
    return true;
}

bool Stimulus::has_trig_terms() const {
    for (const auto& part : parts_)
        if (const auto* trig = std::get_if<TrigPolynomial>(&part))
            if (!trig->terms().empty()) return true;
    return false;
}

std::size_t Stimulus::trig_term_count() const {
    std::size_t n = 0;
    for (const auto& part : parts_)
        if (const auto* trig = std::get_if<TrigPolynomial>(&part)) n += trig->terms().size();
    return n;
}

double Stimulus::max_trig_frequency() const {
    double m = 0.0;
    for (const auto& part : parts_)
        if (const auto* trig = std::get_if<TrigPolynomial>(&part))
            m = std::max(m, trig->max_frequency());
    return m;
}

double Stimulus::smooth_derivative_bound() const {
    double s = 0.0;
    for (const auto& part : parts_)
        if (const auto* trig = std::get_if<TrigPolynomial>(&part)) s += trig->derivative_bound();
    return s;
}

double Stimulus::smooth_second_derivative_bound() const {
    double s = 0.0;
    for (const auto& part : parts_)
        if (const auto* trig = std::get_if<TrigPolynomial>(&part))
            s += trig->second_derivative_bound();
    return s;
}

Stimulus Stimulus::shifted(double tau) const {
    std::vector<StimulusPart> parts;
    parts.reserve(parts_.size());
    for (const auto& part : parts_)
        parts.push_back(std::visit([tau](const auto& p) -> StimulusPart { return p.shifted(tau); },
                                   part));
    return Stimulus(kind_, std::move(parts));
}

Stimulus Stimulus::negated() const {
    std::vector<StimulusPart> parts;
    parts.reserve(parts_.size());
    for (const auto& part : parts_)
        parts.push_back(
            std::visit([](const auto& p) -> StimulusPart { return p.negated(); }, part));
    return Stimulus(kind_, std::move(parts));
}

double Stimulus::next_breakpoint_after(double s) const {
    double next = kInf;
    for (const auto& part : parts_)
        if (const auto* pc = std::get_if<PiecewiseConstant>(&part))
            next = std::min(next, pc->next_breakpoint_after(s));
    return next;
}

std::vector<double> Stimulus::breakpoints_within(double lo, double hi) const {
    std::vector<double> out;
    for (const auto& part : parts_)
        if (const auto* pc = std::get_if<PiecewiseConstant>(&part))
            pc->append_breakpoints(lo, hi, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double Stimulus::piece_bound_at(double s) const {
    double bound = 0.0;
    for (const auto& part : parts_) {
        if (const auto* trig = std::get_if<TrigPolynomial>(&part))
            bound += trig->sup_bound();
        else
            bound += std::abs(std::get<PiecewiseConstant>(part).value(s));
    }
    return bound;
}

// ---------------------------------------------------------------------------
// Free operations

double evaluate(const Stimulus& f, double t) { return f.value(t); }
double antiderivative(const Stimulus& f, double t) { return f.antiderivative(t); }
double mean(const Stimulus& f) { return f.mean(); }
double certified_lower_bound(const Stimulus& f) { return f.lower_bound(); }

Stimulus difference(const Stimulus& f, const Stimulus& g) {
    std::vector<StimulusPart> parts = f.parts();
    const Stimulus neg = g.negated();
    parts.insert(parts.end(), neg.parts().begin(), neg.parts().end());
    return Stimulus::sum(std::move(parts));
}

Stimulus shift_difference(const Stimulus& f, double tau) {
    // Merge each trig part's shifted-minus-original terms so the difference
    // amplitudes 2·|sin(freq·tau/2)|·amp come out exactly; keep PC parts as
    // shifted plus negated copies.
    std::vector<StimulusPart> parts;
    std::vector<TrigTerm> diff_terms;
    for (const auto& part : f.parts()) {
        if (const auto* trig = std::get_if<TrigPolynomial>(&part)) {
            const TrigPolynomial shifted = trig->shifted(tau);
            for (std::size_t i = 0; i < trig->terms().size(); ++i) {
                const TrigTerm& orig = trig->terms()[i];
                const TrigTerm& shft = shifted.terms()[i];
                TrigTerm d{shft.cos_amp - orig.cos_amp, shft.sin_amp - orig.sin_amp, orig.freq};
                if (d.cos_amp != 0.0 || d.sin_amp != 0.0) diff_terms.push_back(d);
            }
        } else {
            const auto& pc = std::get<PiecewiseConstant>(part);
            parts.emplace_back(pc.shifted(tau));
            parts.emplace_back(pc.negated());
        }
    }
    // Distinct parts of f may share a frequency; combine those before
    // constructing the polynomial (frequencies must be unique).
    std::sort(diff_terms.begin(), diff_terms.end(),
              [](const TrigTerm& a, const TrigTerm& b) { return a.freq < b.freq; });
    std::vector<TrigTerm> merged;
    for (const auto& term : diff_terms) {
        if (!merged.empty() && merged.back().freq == term.freq) {
            merged.back().cos_amp += term.cos_amp;
            merged.back().sin_amp += term.sin_amp;
        } else {
            merged.push_back(term);
        }
    }
    parts.emplace_back(TrigPolynomial(0.0, std::move(merged)));
    return Stimulus::sum(std::move(parts));
}

namespace {

// Bisect a sign change of g in [a, b] (g(a) and g(b) of strict opposite sign).
double bisect_zero(const Stimulus& g, double a, double b, double ga) {
    for (int i = 0; i < 80 && b - a > 0.0; ++i) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double gm = g.value(m);
        if (gm == 0.0) return m;
        if ((gm < 0.0) == (ga < 0.0)) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Integral of |g| over a breakpoint-free piece [p, q], error <= tol_piece.
double abs_integral_piece(const Stimulus& g, double p, double q, double tol_piece) {
    if (!(q > p)) return 0.0;
    if (!g.has_trig_terms()) {
        return std::abs(g.value(p)) * (q - p);  // constant on the piece
    }
    // Sample step from the missed-dip bound: a dip of |g| below zero that a
    // sign scan misses between samples has depth <= M2·h^2/8 and width <= h,
    // and there are at most Z/2 of them, Z a zero-count bound for a
    // trigonometric polynomial on the piece.
    const double len = q - p;
    const double m2 = g.smooth_second_derivative_bound();
    const double lmax = g.max_trig_frequency();
    const double zbound = lmax * len / 3.141592653589793 +
                          2.0 * static_cast<double>(g.trig_term_count()) + 2.0;
    double h = len;
    if (m2 > 0.0) h = std::min(len, std::cbrt(4.0 * tol_piece / (zbound * m2)));
    const auto n = static_cast<std::size_t>(std::ceil(len / h));
    h = len / static_cast<double>(n);

    std::vector<double> cuts;
    cuts.push_back(p);
    double prev_s = p;
    double prev_v = g.value(p);
    for (std::size_t i = 1; i <= n; ++i) {
        const double s = (i == n) ? q : p + static_cast<double>(i) * h;
        const double v = g.value(s);
        if (prev_v == 0.0) {
            cuts.push_back(prev_s);
        } else if (v != 0.0 && (v < 0.0) != (prev_v < 0.0)) {
            cuts.push_back(bisect_zero(g, prev_s, s, prev_v));
        }
        prev_s = s;
        prev_v = v;
    }
    cuts.push_back(q);

    double acc = 0.0;
    double fa = g.antiderivative(cuts.front());
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const double fb = g.antiderivative(cuts[i]);
        acc += std::abs(fb - fa);
        fa = fb;
    }
    return acc;
}

}  // namespace

double abs_integral(const Stimulus& g, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    std::vector<double> cuts = g.breakpoints_within(a, b);
    cuts.insert(cuts.begin(), a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        const double share = (cuts[i + 1] - cuts[i]) / (b - a);
        acc += abs_integral_piece(g, cuts[i], cuts[i + 1], tol * share);
    }
    return acc;
}

double sup_distance(const Stimulus& f, const Stimulus& g, const Window& w) {
    const Stimulus d = difference(f, g);
    double m = 0.0;
    for (double t : w.grid()) m = std::max(m, std::abs(d.value(t)));
    for (double t : d.breakpoints_within(w.lo, w.hi)) m = std::max(m, std::abs(d.value(t)));
    return m;
}

double stepanov_shift_distance(const Stimulus& f, double tau, const Window& w) {
    const Stimulus d = shift_difference(f, tau);
    double m = 0.0;
    for (double t : w.grid()) m = std::max(m, abs_integral(d, t, t + 1.0, 1e-6));
    return m;
}

}  // namespace apfire
