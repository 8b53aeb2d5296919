#include "scanstat/scan.hpp"

#include "scanstat/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace scanstat {

std::string_view to_string(Variant v) noexcept {
    return v == Variant::studentized ? "studentized" : "standardized";
}

std::string_view to_string(Side s) noexcept {
    switch (s) {
    case Side::plus: return "plus";
    case Side::minus: return "minus";
    case Side::two_sided: return "two_sided";
    }
    return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Both scan paths normalize through these helpers so that a pair evaluated by
// either one produces the same bits.
inline double studentized_scale(double nn, double dd) { return std::sqrt(dd * (1.0 - dd / nn)); }

inline double studentized_value(double nn, double dd, double scale, double span) {
    return (dd - nn * span) / scale;
}

inline bool standardized_defined(double span) { return span > 0.0 && span < 1.0; }

inline double standardized_value(double nn, double dd, double span) {
    return (dd - nn * span) / std::sqrt(nn * span * (1.0 - span));
}

struct Candidate {
    double value = -kInf;
    std::size_t d = 0;
    std::size_t i = 0;
    bool found = false;
};

// Larger value first, then shorter length, then smaller left index.
inline bool precedes(double value, std::size_t d, std::size_t i, const Candidate& c) {
    if (!c.found) return true;
    if (value != c.value) return value > c.value;
    if (d != c.d) return d < c.d;
    return i < c.i;
}

inline void offer(Candidate& c, double value, std::size_t d, std::size_t i) {
    if (precedes(value, d, i, c)) {
        c = Candidate{value, d, i, true};
    }
}

struct SideCandidates {
    Candidate plus;
    Candidate minus;
    std::uint64_t pairs = 0;
};

ScanOutcome assemble(const SortedSample& sample, const ScanSpec& spec, const SideCandidates& found, bool exact) {
    const Candidate* chosen = nullptr;
    Side side = Side::plus;
    switch (spec.side) {
    case Side::plus:
        chosen = &found.plus;
        break;
    case Side::minus:
        chosen = &found.minus;
        side = Side::minus;
        break;
    case Side::two_sided:
        if (found.minus.found && precedes(found.minus.value, found.minus.d, found.minus.i, found.plus)) {
            chosen = &found.minus;
            side = Side::minus;
        } else {
            chosen = &found.plus;
        }
        break;
    }
    if (!chosen->found) {
        throw Error(ErrorCode::EmptyWindow, "no pair with a defined statistic in the window");
    }
    ScanOutcome out;
    out.value = chosen->value;
    out.side = side;
    out.variant = spec.variant;
    out.i = chosen->i;
    out.j = chosen->i + chosen->d;
    out.lower = sample.u(out.i);
    out.upper = sample.u(out.j);
    out.pairs_evaluated = found.pairs;
    out.exact = exact;
    return out;
}

void check_pair(std::size_t n, std::size_t i, std::size_t j) {
    if (!(i < j && j <= n)) {
        throw Error(ErrorCode::DomainError, "pair indices must satisfy 0 <= i < j <= n");
    }
}

// One pass over all positions at a fixed length: locate the extreme span on
// each side, then normalize only the spans within rounding distance of it.
void scan_length(const double* u, std::size_t n, std::size_t d, Variant variant, bool want_plus, bool want_minus,
                 SideCandidates& acc) {
    const std::size_t m = n - d + 1;
    const double nn = static_cast<double>(n);
    const double dd = static_cast<double>(d);
    const bool standardized = variant == Variant::standardized;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    double lo[4] = {kInf, kInf, kInf, kInf};
    double hi[4] = {-kInf, -kInf, -kInf, -kInf};
    std::size_t i = 0;
    if (standardized) {
        for (; i + 4 <= m; i += 4) {
            for (int lane = 0; lane < 4; ++lane) {
                double x = u[i + lane + d] - u[i + lane];
                x = standardized_defined(x) ? x : nan;
                lo[lane] = x < lo[lane] ? x : lo[lane];
                hi[lane] = x > hi[lane] ? x : hi[lane];
            }
        }
    } else {
        for (; i + 4 <= m; i += 4) {
            for (int lane = 0; lane < 4; ++lane) {
                const double x = u[i + lane + d] - u[i + lane];
                lo[lane] = x < lo[lane] ? x : lo[lane];
                hi[lane] = x > hi[lane] ? x : hi[lane];
            }
        }
    }
    for (; i < m; ++i) {
        const double x = u[i + d] - u[i];
        if (standardized && !standardized_defined(x)) continue;
        lo[0] = x < lo[0] ? x : lo[0];
        hi[0] = x > hi[0] ? x : hi[0];
    }
    const double min_span = std::min(std::min(lo[0], lo[1]), std::min(lo[2], lo[3]));
    const double max_span = std::max(std::max(hi[0], hi[1]), std::max(hi[2], hi[3]));
    acc.pairs += m;
    if (min_span == kInf) {
        return; // every span at this length is degenerate
    }

    const double scale = standardized ? 1.0 : studentized_scale(nn, dd);
    auto value_at = [&](double span) {
        return standardized ? standardized_value(nn, dd, span) : studentized_value(nn, dd, scale, span);
    };
    // The normalized value is monotone in the span; rounding can only reorder
    // spans that agree to a few ulps, so a relative band of 1e-9 is ample.
    const double plus_cut = min_span + std::abs(min_span) * 1e-9;
    const double minus_cut = max_span - std::abs(max_span) * 1e-9;
    for (std::size_t p = 0; p < m; ++p) {
        const double x = u[p + d] - u[p];
        if (standardized && !standardized_defined(x)) continue;
        if (want_plus && x <= plus_cut) {
            offer(acc.plus, value_at(x), d, p);
        }
        if (want_minus && x >= minus_cut) {
            offer(acc.minus, -value_at(x), d, p);
        }
    }
}

constexpr std::size_t kLeafSize = 8;

// Min/max of e(t) = n u(t) - t and of u(t) over aligned blocks of
// kLeafSize * 2^level indices, level 0 being the leaves.
class BlockTree {
public:
    BlockTree(const double* u, std::size_t n) : points_(n + 1) {
        const double nn = static_cast<double>(n);
        std::size_t size = kLeafSize;
        std::size_t count = (points_ + size - 1) / size;
        Level leaves(count);
        for (std::size_t t = 0; t < points_; ++t) {
            const double e = nn * u[t] - static_cast<double>(t);
            const std::size_t blk = t / size;
            leaves.min_e[blk] = std::min(leaves.min_e[blk], e);
            leaves.max_e[blk] = std::max(leaves.max_e[blk], e);
            leaves.min_u[blk] = std::min(leaves.min_u[blk], u[t]);
            leaves.max_u[blk] = std::max(leaves.max_u[blk], u[t]);
        }
        levels_.push_back(std::move(leaves));
        while (count > 1) {
            const Level& below = levels_.back();
            const std::size_t parents = (count + 1) / 2;
            Level up(parents);
            for (std::size_t c = 0; c < count; ++c) {
                const std::size_t p = c / 2;
                up.min_e[p] = std::min(up.min_e[p], below.min_e[c]);
                up.max_e[p] = std::max(up.max_e[p], below.max_e[c]);
                up.min_u[p] = std::min(up.min_u[p], below.min_u[c]);
                up.max_u[p] = std::max(up.max_u[p], below.max_u[c]);
            }
            levels_.push_back(std::move(up));
            count = parents;
        }
    }

    struct Level {
        explicit Level(std::size_t count)
            : min_e(count, kInf), max_e(count, -kInf), min_u(count, kInf), max_u(count, -kInf) {}
        std::vector<double> min_e, max_e, min_u, max_u;
    };

    std::size_t top() const noexcept { return levels_.size() - 1; }
    std::size_t count(std::size_t level) const noexcept { return levels_[level].min_e.size(); }
    const Level& level(std::size_t level) const noexcept { return levels_[level]; }
    std::size_t first(std::size_t level, std::size_t block) const noexcept { return block * (kLeafSize << level); }
    std::size_t last(std::size_t level, std::size_t block) const noexcept {
        return std::min(points_ - 1, first(level, block) + (kLeafSize << level) - 1);
    }

private:
    std::size_t points_;
    std::vector<Level> levels_;
};

// Exact branch and bound over pairs of tree blocks (I, J), I <= J. Every
// pair in a block pair has length in [dl, dh] and span in [xlo, xhi]; the
// statistic is monotone in span and (for the standardized form) in length,
// which gives the box maximum directly. For the studentized form the
// numerator is also bounded through the block extremes of e. A block pair is
// dropped once its bound falls below the running best by more than rounding.
class PairSearch {
public:
    PairSearch(const double* u, std::size_t n, std::size_t d_lo, std::size_t d_hi, Variant variant, bool want_plus,
               bool want_minus, SideCandidates& acc)
        : u_(u), n_(n), nn_(static_cast<double>(n)), d_lo_(d_lo), d_hi_(d_hi),
          standardized_(variant == Variant::standardized), want_plus_(want_plus), want_minus_(want_minus),
          acc_(acc), tree_(u, n) {}

    void run() { visit(tree_.top(), 0, 0, want_plus_, want_minus_); }

private:
    static double margin(double best) { return 1e-7 * (1.0 + std::abs(best)); }

    struct Box {
        std::size_t dl, dh;
        double xlo, xhi;
        double plus_e, minus_e; // numerator bounds from e
    };

    double studentized_bound(double num, const Box& box) const {
        if (num <= 0.0) return num / std::sqrt(nn_ * 0.25);
        return num / std::min(studentized_scale(nn_, static_cast<double>(box.dl)),
                              studentized_scale(nn_, static_cast<double>(box.dh)));
    }

    double plus_bound(const Box& box) const {
        if (standardized_) {
            // Decreasing in span, increasing in length.
            if (!(box.xlo > 0.0)) return kInf;
            if (box.xlo >= 1.0) return -kInf;
            return standardized_value(nn_, static_cast<double>(box.dh), box.xlo);
        }
        const double by_span = static_cast<double>(box.dh) - nn_ * box.xlo;
        return studentized_bound(std::min(box.plus_e, by_span), box);
    }

    double minus_bound(const Box& box) const {
        if (standardized_) {
            if (!(box.xhi > 0.0)) return -kInf;
            if (box.xhi >= 1.0) return kInf;
            return -standardized_value(nn_, static_cast<double>(box.dl), box.xhi);
        }
        const double by_span = nn_ * box.xhi - static_cast<double>(box.dl);
        return studentized_bound(std::min(box.minus_e, by_span), box);
    }

    static bool alive(const Candidate& c, double bound) { return !c.found || bound >= c.value - margin(c.value); }

    void visit(std::size_t level, std::size_t ib, std::size_t jb, bool plus, bool minus) {
        const std::size_t i_first = tree_.first(level, ib);
        const std::size_t i_last = tree_.last(level, ib);
        const std::size_t j_first = tree_.first(level, jb);
        const std::size_t j_last = tree_.last(level, jb);
        const std::size_t dmin = ib == jb ? 1 : j_first - i_last;
        if (j_last <= i_first) return;
        const std::size_t dmax = j_last - i_first;
        Box box;
        box.dl = std::max(dmin, d_lo_);
        box.dh = std::min(dmax, d_hi_);
        if (box.dl > box.dh) return;
        const auto& st = tree_.level(level);
        box.xlo = std::max(0.0, st.min_u[jb] - st.max_u[ib]);
        box.xhi = st.max_u[jb] - st.min_u[ib];
        box.plus_e = st.max_e[ib] - st.min_e[jb];
        box.minus_e = st.max_e[jb] - st.min_e[ib];
        plus = plus && alive(acc_.plus, plus_bound(box));
        minus = minus && alive(acc_.minus, minus_bound(box));
        if (!plus && !minus) return;

        if (level == 0) {
            evaluate(i_first, i_last, j_first, j_last, box, plus, minus);
            return;
        }
        const std::size_t below = tree_.count(level - 1);
        for (std::size_t ci = 2 * ib; ci <= 2 * ib + 1 && ci < below; ++ci) {
            for (std::size_t cj = std::max(ci, 2 * jb); cj <= 2 * jb + 1 && cj < below; ++cj) {
                visit(level - 1, ci, cj, plus, minus);
            }
        }
    }

    void evaluate(std::size_t i_first, std::size_t i_last, std::size_t j_first, std::size_t j_last, const Box& box,
                  bool plus, bool minus) {
        for (std::size_t i = i_first; i <= i_last; ++i) {
            const std::size_t jl = std::max({j_first, i + box.dl});
            const std::size_t jh = std::min(j_last, i + box.dh);
            for (std::size_t j = jl; j <= jh; ++j) {
                const double span = u_[j] - u_[i];
                const std::size_t d = j - i;
                const double dd = static_cast<double>(d);
                double m;
                if (standardized_) {
                    if (!standardized_defined(span)) continue;
                    m = standardized_value(nn_, dd, span);
                } else {
                    m = studentized_value(nn_, dd, studentized_scale(nn_, dd), span);
                }
                ++acc_.pairs;
                if (plus) offer(acc_.plus, m, d, i);
                if (minus) offer(acc_.minus, -m, d, i);
            }
        }
    }

    const double* u_;
    std::size_t n_;
    double nn_;
    std::size_t d_lo_, d_hi_;
    bool standardized_, want_plus_, want_minus_;
    SideCandidates& acc_;
    BlockTree tree_;
};

} // namespace

LengthRange resolve_window(std::size_t n, const ScanSpec& spec) {
    if (spec.k == 0) {
        throw Error(ErrorCode::DomainError, "window lower bound k must be at least 1");
    }
    const std::size_t longest = spec.variant == Variant::studentized ? n - 1 : n;
    const std::size_t hi = std::min(spec.l, longest);
    if (spec.k > hi) {
        throw Error(ErrorCode::EmptyWindow, "window [" + std::to_string(spec.k) + ", " + std::to_string(spec.l) +
                                                "] is empty for n = " + std::to_string(n));
    }
    return {spec.k, hi};
}

double length_weight(std::size_t n, std::size_t length) {
    const double r = static_cast<double>(length) / static_cast<double>(n);
    return std::sqrt(r * (1.0 - r));
}

double studentized_pair(const SortedSample& sample, std::size_t i, std::size_t j) {
    const std::size_t n = sample.size();
    check_pair(n, i, j);
    if (j - i == n) {
        throw Error(ErrorCode::DegenerateLength, "length n has zero variance");
    }
    const double nn = static_cast<double>(n);
    const double dd = static_cast<double>(j - i);
    return studentized_value(nn, dd, studentized_scale(nn, dd), sample.u(j) - sample.u(i));
}

double standardized_pair(const SortedSample& sample, std::size_t i, std::size_t j) {
    const std::size_t n = sample.size();
    check_pair(n, i, j);
    const double span = sample.u(j) - sample.u(i);
    if (!standardized_defined(span)) {
        throw Error(ErrorCode::DegenerateSpan, "span u(j) - u(i) must lie strictly inside (0, 1)");
    }
    return standardized_value(static_cast<double>(n), static_cast<double>(j - i), span);
}

ScanOutcome scan(const SortedSample& sample, const ScanSpec& spec) {
    const std::size_t n = sample.size();
    const LengthRange range = resolve_window(n, spec);
    const double* u = sample.padded().data();
    const double nn = static_cast<double>(n);
    const bool want_plus = spec.side != Side::minus;
    const bool want_minus = spec.side != Side::plus;

    SideCandidates acc;
    for (std::size_t d = range.lo; d <= range.hi; ++d) {
        const double dd = static_cast<double>(d);
        const double scale = studentized_scale(nn, dd);
        for (std::size_t i = 0; i + d <= n; ++i) {
            const double span = u[i + d] - u[i];
            double m;
            if (spec.variant == Variant::standardized) {
                if (!standardized_defined(span)) continue;
                m = standardized_value(nn, dd, span);
            } else {
                m = studentized_value(nn, dd, scale, span);
            }
            ++acc.pairs;
            if (want_plus) offer(acc.plus, m, d, i);
            if (want_minus) offer(acc.minus, -m, d, i);
        }
    }
    return assemble(sample, spec, acc, true);
}

ScanOutcome scan_fast(const SortedSample& sample, const ScanSpec& spec, const ScanOptions& options) {
    const std::size_t n = sample.size();
    LengthRange range = resolve_window(n, spec);
    bool exact = true;
    if (options.mode == WindowMode::asymptotic) {
        if (spec.variant != Variant::studentized || spec.side != Side::plus) {
            throw Error(ErrorCode::DomainError, "the asymptotic window applies to the studentized plus scan only");
        }
        if (!(options.window_constant > 0.0)) {
            throw Error(ErrorCode::DomainError, "window constant must be positive");
        }
        const double logn = std::log(static_cast<double>(n));
        const double cap = std::floor(options.window_constant * logn * logn * logn);
        if (cap < static_cast<double>(range.hi)) {
            range.hi = static_cast<std::size_t>(cap);
        }
        if (range.hi < range.lo) {
            throw Error(ErrorCode::EmptyWindow, "asymptotic window excludes every admissible length");
        }
        exact = false;
    }

    const double* u = sample.padded().data();
    const bool want_plus = spec.side != Side::minus;
    const bool want_minus = spec.side != Side::plus;
    SideCandidates acc;
    if (!options.prune) {
        for (std::size_t d = range.lo; d <= range.hi; ++d) {
            scan_length(u, n, d, spec.variant, want_plus, want_minus, acc);
        }
        return assemble(sample, spec, acc, exact);
    }
    // Full passes at geometrically spaced lengths give the search a running
    // best to prune against from the start.
    for (std::size_t d = range.lo;; d *= 2) {
        scan_length(u, n, std::min(d, range.hi), spec.variant, want_plus, want_minus, acc);
        if (d >= range.hi) break;
    }
    PairSearch(u, n, range.lo, range.hi, spec.variant, want_plus, want_minus, acc).run();
    return assemble(sample, spec, acc, exact);
}

EickerStatistics eicker_statistics(const SortedSample& sample) {
    const std::size_t n = sample.size();
    const double nn = static_cast<double>(n);
    EickerStatistics out;
    for (std::size_t i = 1; i <= n; ++i) {
        const double ui = sample.u(i);
        const double ii = static_cast<double>(i);
        if (ui > 0.0 && ui < 1.0) {
            const double v = (ii - nn * ui) / std::sqrt(nn * ui * (1.0 - ui));
            if (!out.standardized || v > out.standardized->value) {
                out.standardized = IndexedValue{v, i};
            }
        }
        if (i < n) {
            const double v = (ii - nn * ui) / std::sqrt(ii * (1.0 - ii / nn));
            if (!out.studentized || v > out.studentized->value) {
                out.studentized = IndexedValue{v, i};
            }
        }
    }
    if (!out.standardized && !out.studentized) {
        throw Error(ErrorCode::AllDegenerate, "every order statistic has a zero denominator");
    }
    return out;
}

double ks_statistic(const SortedSample& sample) {
    const std::size_t n = sample.size();
    const double np1 = static_cast<double>(n + 1);
    double worst = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        worst = std::max(worst, std::abs(sample.u(i) - static_cast<double>(i) / np1));
    }
    return std::sqrt(static_cast<double>(n)) * worst;
}

double min_spacing(const SortedSample& sample) {
    const std::size_t n = sample.size();
    double best = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        best = std::min(best, sample.u(i + 1) - sample.u(i));
    }
    return best;
}

} // namespace scanstat
