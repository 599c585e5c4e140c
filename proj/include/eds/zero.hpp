#ifndef EDS_ZERO_HPP
#define EDS_ZERO_HPP

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "eds/eval.hpp"
#include "eds/ratfun.hpp"

namespace eds {

/// Configuration of the probabilistic zero test.  Deterministic for a fixed
/// seed.  `pools` assigns a discrete value pool to designated parameter
/// variables; by default the exponent parameter `a` is drawn from
/// {2, 3, 5, -2}, which stays clear of the excluded values 4, 1, 0, -1.
struct ZeroOptions {
    std::uint64_t seed = 0xED500001ULL;
    int samples = 8;
    double tolerance = 1e-9;
    int max_draws_per_sample = 400;
    std::map<std::string, std::vector<Rational>> pools = {
        {"a", {Rational(2), Rational(3), Rational(5), Rational(-2)}}};
};

inline ZeroOptions& default_zero_options() {
    static ZeroOptions opts;
    return opts;
}

namespace detail {

/// One admissible sample: all variables bound, all function domains
/// respected.  Coordinates come from the rational grid k/16, k in [8,48],
/// i.e. uniform in [1/2, 3]; redraws on domain violations.
inline bool probe_zero(const Expr& e, const std::vector<std::string>& vars,
                       std::mt19937_64& rng, const ZeroOptions& opts, bool& indeterminate) {
    std::uniform_int_distribution<int> grid(8, 48);
    for (int attempt = 0; attempt < opts.max_draws_per_sample; ++attempt) {
        Point pt;
        for (const auto& v : vars) {
            auto pooled = opts.pools.find(v);
            if (pooled != opts.pools.end() && !pooled->second.empty()) {
                std::uniform_int_distribution<std::size_t> pick(0, pooled->second.size() - 1);
                pt.bindings.emplace(v, pooled->second[pick(rng)]);
            } else {
                pt.bindings.emplace(v, Rational(grid(rng), 16));
            }
        }
        try {
            ValMag vm = eval_mag(e, pt);
            indeterminate = false;
            return std::fabs(vm.val) <= opts.tolerance * std::max(1.0, vm.mag);
        } catch (const DomainError&) {
            continue; // redraw outside the function domain
        }
    }
    indeterminate = true;
    return false;
}

} // namespace detail

/// true iff e vanishes identically on a dense open subset of its domain.
///
/// Decision procedure: canonicalize as a rational function over transcendental
/// kernels.  A zero numerator is a proof of zero.  A nonzero numerator of a
/// kernel-free expression is a proof of nonzero.  Otherwise fall back to
/// sampling at `opts.samples` admissible points; zero iff all evaluations stay
/// below the relative tolerance.  Domain-sampling failure raises
/// IndeterminateError; callers must treat that as nonzero and may retry.
inline bool is_zero(const Expr& e, const ZeroOptions& opts) {
    if (e->kind == Kind::Number) return e->number == 0;
    AtomTable table = atom_table(e);
    RatFun canonical = to_ratfun(e, table);
    if (canonical.num.is_zero()) return true;
    if (!table.has_kernels()) return false;

    auto var_set = variables(e);
    std::vector<std::string> vars(var_set.begin(), var_set.end());
    std::mt19937_64 rng(opts.seed);
    for (int i = 0; i < opts.samples; ++i) {
        bool indeterminate = false;
        if (!detail::probe_zero(e, vars, rng, opts, indeterminate)) {
            if (indeterminate)
                throw IndeterminateError("zero test could not sample the domain of " + to_string(e));
            return false;
        }
    }
    return true;
}

inline bool is_zero(const Expr& e) { return is_zero(e, default_zero_options()); }

inline bool is_equal(const Expr& a, const Expr& b) {
    if (equal(a, b)) return true;
    return is_zero(a - b);
}

} // namespace eds

#endif
