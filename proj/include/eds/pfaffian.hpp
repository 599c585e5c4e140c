#ifndef EDS_PFAFFIAN_HPP
#define EDS_PFAFFIAN_HPP

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "eds/form.hpp"
#include "eds/ratfun.hpp"

namespace eds {

/// Ordered set of independent 1-forms on a chart.
struct PfaffianSystem {
    Chart chart;
    std::vector<Form> generators;

    PfaffianSystem(Chart ch, std::vector<Form> gens,
                   const ZeroOptions& opts = default_zero_options())
        : chart(std::move(ch)), generators(std::move(gens)) {
        for (auto& g : generators) {
            require_same_chart(g.chart, chart, "pfaffian system");
            if (g.degree != 1) throw Error("pfaffian generators must be 1-forms");
            g.prune(opts);
            if (g.is_structurally_zero()) throw SingularError("zero generator in pfaffian system");
        }
        if (sym_rank(coefficient_matrix(generators), nullptr, opts) !=
            static_cast<int>(generators.size()))
            throw SingularError("pfaffian generators are dependent at the generic point");
    }

    int rank() const { return static_cast<int>(generators.size()); }
};

/// Greedy completion of a generator list to a full coframe by coordinate
/// differentials taken in chart order, skipping dependent ones.
inline std::vector<Form> complement_coframe(const std::vector<Form>& gens, const Chart& chart,
                                            Assumptions* asmp = nullptr,
                                            const ZeroOptions& opts = default_zero_options()) {
    std::vector<Form> current = gens;
    std::vector<Form> complement;
    int rank = sym_rank(coefficient_matrix(current), asmp, opts);
    for (int i = 0; i < chart.dim() && rank < chart.dim(); ++i) {
        Form dx = Form::differential(chart, i);
        current.push_back(dx);
        int r2 = sym_rank(coefficient_matrix(current), asmp, opts);
        if (r2 > rank) {
            complement.push_back(dx);
            rank = r2;
        } else {
            current.pop_back();
        }
    }
    if (rank < chart.dim()) throw SingularError("could not complete to a coframe");
    return complement;
}

/// Structure coefficients of d(theta^i) modulo the system, expressed in the
/// wedge basis of a complement coframe pi^1..pi^m:
///   d theta^i = sum_{j<k} C^i_{jk} pi^j ^ pi^k   (mod theta^1..theta^n)
struct StructureData {
    std::vector<Form> complement;
    std::vector<std::map<std::pair<int, int>, Expr>> coeffs; // per generator, keys j<k
    Assumptions assumptions;

    Expr coefficient(int i, int j, int k) const {
        if (j == k) return zero();
        bool flip = j > k;
        if (flip) std::swap(j, k);
        auto it = coeffs[static_cast<std::size_t>(i)].find({j, k});
        if (it == coeffs[static_cast<std::size_t>(i)].end()) return zero();
        return flip ? -it->second : it->second;
    }
};

inline StructureData structure_data(const PfaffianSystem& sys,
                                    const ZeroOptions& opts = default_zero_options()) {
    StructureData sd;
    sd.complement = complement_coframe(sys.generators, sys.chart, &sd.assumptions, opts);
    const int n = sys.rank();
    std::vector<Form> full = sys.generators;
    full.insert(full.end(), sd.complement.begin(), sd.complement.end());
    CoframeBasis basis(full, {}, &sd.assumptions, opts);
    for (int i = 0; i < n; ++i) {
        Form d = exterior_derivative(sys.generators[static_cast<std::size_t>(i)]);
        Form in_basis = basis.to_basis(d);
        std::map<std::pair<int, int>, Expr> row;
        for (const auto& [idx, c] : in_basis.coeffs) {
            if (idx[0] >= n && idx[1] >= n) row.emplace(std::make_pair(idx[0] - n, idx[1] - n), c);
        }
        sd.coeffs.push_back(std::move(row));
    }
    return sd;
}

/// Canonical representative of a 2-form modulo the algebraic ideal of the
/// system: rewrite in the coframe generators++complement and drop every term
/// touching a generator.
inline Form reduce_mod(const Form& omega, const PfaffianSystem& sys,
                       const std::vector<Form>& complement, Assumptions* asmp = nullptr,
                       const ZeroOptions& opts = default_zero_options()) {
    const int n = sys.rank();
    std::vector<Form> full = sys.generators;
    full.insert(full.end(), complement.begin(), complement.end());
    if (static_cast<int>(full.size()) != sys.chart.dim())
        throw SingularError("generators and complement do not form a coframe");
    Assumptions local;
    CoframeBasis basis(full, {}, &local, opts); // throws SingularError when dependent
    if (asmp) asmp->merge(local);
    Form in_basis = basis.to_basis(omega);
    Form kept = Form::zero_form(basis.label_chart(), omega.degree);
    for (const auto& [idx, c] : in_basis.coeffs) {
        bool touches_generator = false;
        for (int k : idx)
            if (k < n) touches_generator = true;
        if (!touches_generator) kept.coeffs.emplace(idx, c);
    }
    return basis.from_basis(kept);
}

/// Frobenius condition: d theta^i = 0 (mod theta^1..theta^n) for all i.
inline bool is_completely_integrable(const PfaffianSystem& sys,
                                     const ZeroOptions& opts = default_zero_options()) {
    StructureData sd = structure_data(sys, opts);
    for (const auto& row : sd.coeffs)
        for (const auto& [jk, c] : row)
            if (!is_zero(c, opts)) return false;
    return true;
}

inline bool span_equal(const std::vector<Form>& a, const std::vector<Form>& b,
                       const ZeroOptions& opts = default_zero_options()) {
    if (a.empty() && b.empty()) return true;
    ExprMat ma = coefficient_matrix(a);
    ExprMat mb = coefficient_matrix(b);
    std::vector<Form> joint = a;
    joint.insert(joint.end(), b.begin(), b.end());
    ExprMat mj = coefficient_matrix(joint);
    int ra = sym_rank(ma, nullptr, opts);
    int rb = sym_rank(mb, nullptr, opts);
    int rj = sym_rank(mj, nullptr, opts);
    return ra == rb && rb == rj;
}

/// Cauchy characteristic system Ch(Sigma) = Sigma + span{ sum_k C^i_{jk} pi^k }.
/// The result is independent, and completely integrable by Cartan's theorem;
/// both are checked.  For completely integrable input, Ch(Sigma) = Sigma.
inline PfaffianSystem cauchy_system(const PfaffianSystem& sys, Assumptions* asmp = nullptr,
                                    const ZeroOptions& opts = default_zero_options()) {
    StructureData sd = structure_data(sys, opts);
    if (asmp) asmp->merge(sd.assumptions);
    const int n = sys.rank();
    const int m = static_cast<int>(sd.complement.size());
    std::vector<Form> result = sys.generators;
    int rank = n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            Form rho = Form::zero_form(sys.chart, 1);
            for (int k = 0; k < m; ++k) {
                Expr c = sd.coefficient(i, j, k);
                if (!is_zero_number(c)) rho = rho + c * sd.complement[static_cast<std::size_t>(k)];
            }
            rho.prune(opts);
            if (rho.is_structurally_zero()) continue;
            result.push_back(rho);
            int r2 = sym_rank(coefficient_matrix(result), asmp, opts);
            if (r2 > rank) rank = r2;
            else result.pop_back();
        }
    }
    PfaffianSystem ch(sys.chart, result, opts);
    if (!is_completely_integrable(ch, opts))
        throw Error("cauchy system failed the integrability check; "
                    "rank assumptions may be violated");
    return ch;
}

/// Order-sensitive solvability test (the ordering is part of the data):
/// (i) span(W) = span(Ch(Sigma)), and (ii) dW^1 = 0 and
/// dW^p = 0 mod (W^1,...,W^{p-1}) for p = 2..m.
inline bool triangular_derivatives(const std::vector<Form>& w,
                                   const ZeroOptions& opts = default_zero_options()) {
    for (std::size_t p = 0; p < w.size(); ++p) {
        Form dw = exterior_derivative(w[p]);
        dw.prune(opts);
        if (dw.is_structurally_zero()) continue;
        if (p == 0) return false;
        std::vector<Form> head(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p));
        try {
            PfaffianSystem sigma_p(w[0].chart, head, opts);
            std::vector<Form> comp = complement_coframe(head, w[0].chart, nullptr, opts);
            Form reduced = reduce_mod(dw, sigma_p, comp, nullptr, opts);
            reduced.prune(opts);
            if (!reduced.is_structurally_zero()) return false;
        } catch (const SingularError&) {
            return false;
        }
    }
    return true;
}

inline bool is_solvable_system(const std::vector<Form>& w, const PfaffianSystem& sys,
                               const ZeroOptions& opts = default_zero_options()) {
    if (w.empty()) return false;
    PfaffianSystem ch = cauchy_system(sys, nullptr, opts);
    if (!span_equal(w, ch.generators, opts)) return false;
    return triangular_derivatives(w, opts);
}

/// Search for an ordering of the given forms that satisfies the triangular
/// derivative condition; depth-first with backtracking.
inline std::optional<std::vector<Form>> solvable_order(const std::vector<Form>& forms,
                                                       const ZeroOptions& opts = default_zero_options()) {
    std::vector<Form> chosen;
    std::vector<bool> used(forms.size(), false);

    // check that appending f keeps the triangular property
    auto admissible = [&](const Form& f) {
        Form df = exterior_derivative(f);
        df.prune(opts);
        if (df.is_structurally_zero()) return true;
        if (chosen.empty()) return false;
        try {
            PfaffianSystem head(f.chart, chosen, opts);
            std::vector<Form> comp = complement_coframe(chosen, f.chart, nullptr, opts);
            Form reduced = reduce_mod(df, head, comp, nullptr, opts);
            reduced.prune(opts);
            return reduced.is_structurally_zero();
        } catch (const SingularError&) {
            return false;
        }
    };

    std::function<bool()> dfs = [&]() -> bool {
        if (chosen.size() == forms.size()) return true;
        for (std::size_t i = 0; i < forms.size(); ++i) {
            if (used[i]) continue;
            if (!admissible(forms[i])) continue;
            used[i] = true;
            chosen.push_back(forms[i]);
            if (dfs()) return true;
            chosen.pop_back();
            used[i] = false;
        }
        return false;
    };
    if (!dfs()) return std::nullopt;
    return chosen;
}

/// dh in span(Sigma) over the expression field.
inline bool is_first_integral(const Expr& h, const PfaffianSystem& sys,
                              const ZeroOptions& opts = default_zero_options()) {
    Form dh = exterior_derivative(Form::function(sys.chart, h));
    dh.prune(opts);
    if (dh.is_structurally_zero()) return true;
    std::vector<Form> joint = sys.generators;
    joint.push_back(dh);
    return sym_rank(coefficient_matrix(joint), nullptr, opts) == sys.rank();
}

// ---------------------------------------------------------------------------
// first integrals by quadrature
// ---------------------------------------------------------------------------

struct QuadratureResult {
    std::vector<Expr> integrals;          // u_1..u_m (partial on failure)
    std::optional<std::size_t> failed_at; // index p where the ansatz ran dry
    Assumptions assumptions;
};

namespace detail {

/// Ansatz basis: monomials up to the degree bound, log of each coordinate,
/// and exp/log kernels found in the coefficients of the solvable system.
inline std::vector<Expr> quadrature_ansatz(const std::vector<Form>& w, int degree_bound) {
    const Chart& chart = w[0].chart;
    const int dim = chart.dim();
    std::vector<Expr> basis;
    // monomials ordered by (total degree, exponent tuple)
    std::vector<std::vector<int>> mons;
    std::vector<int> cur(static_cast<std::size_t>(dim), 0);
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == dim) {
            mons.push_back(cur);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            cur[static_cast<std::size_t>(pos)] = e;
            rec(pos + 1, remaining - e);
        }
        cur[static_cast<std::size_t>(pos)] = 0;
    };
    rec(0, degree_bound);
    std::sort(mons.begin(), mons.end(), [](const auto& a, const auto& b) {
        int da = 0, db = 0;
        for (int e : a) da += e;
        for (int e : b) db += e;
        if (da != db) return da < db;
        return a < b;
    });
    for (const auto& m : mons) {
        std::vector<Expr> fs;
        for (int i = 0; i < dim; ++i)
            if (m[static_cast<std::size_t>(i)] > 0)
                fs.push_back(pow(sym(chart.coords[static_cast<std::size_t>(i)]),
                                 Rational(m[static_cast<std::size_t>(i)])));
        basis.push_back(fs.empty() ? one() : mul(std::move(fs)));
    }
    // antiderivative patterns: log x_i and transcendental kernels of the input
    for (int i = 0; i < dim; ++i)
        basis.push_back(log_e(sym(chart.coords[static_cast<std::size_t>(i)])));
    std::vector<Expr> kernels;
    for (const auto& f : w)
        for (const auto& [idx, c] : f.coeffs) {
            AtomTable t = atom_table(c);
            for (const auto& a : t.atoms)
                if (a->kind == Kind::Call) kernels.push_back(a);
        }
    std::sort(kernels.begin(), kernels.end(), ExprLess{});
    kernels.erase(std::unique(kernels.begin(), kernels.end(),
                              [](const Expr& a, const Expr& b) { return equal(a, b); }),
                  kernels.end());
    for (const auto& k : kernels) {
        bool dup = false;
        for (const auto& b : basis)
            if (equal(b, k)) dup = true;
        if (!dup) basis.push_back(k);
    }
    return basis;
}

} // namespace detail

/// Quadrature of a solvable system: returns u_1..u_m with
/// du_p in span(W^1..W^p) \ span(W^1..W^{p-1}), functionally independent.
/// Polynomial ansatz (default total degree 4) plus the antiderivative
/// patterns log x and exp-kernels, solved as an exact linear system in the
/// ansatz coefficients.
inline QuadratureResult first_integrals_by_quadrature(const std::vector<Form>& w,
                                                      int degree_bound = 4,
                                                      const ZeroOptions& opts = default_zero_options()) {
    if (w.empty()) throw Error("empty solvable system");
    const Chart& chart = w[0].chart;
    const int dim = chart.dim();
    const std::size_t m = w.size();

    QuadratureResult out;
    std::vector<Form> complement = complement_coframe(w, chart, &out.assumptions, opts);
    std::vector<Form> full = w;
    full.insert(full.end(), complement.begin(), complement.end());
    CoframeBasis basis(full, {}, &out.assumptions, opts);

    std::vector<Expr> ansatz = detail::quadrature_ansatz(w, degree_bound);
    const std::size_t na = ansatz.size();

    // components of d(g_alpha) in the full coframe, computed once
    std::vector<std::vector<Expr>> comp(na, std::vector<Expr>(static_cast<std::size_t>(dim), zero()));
    for (std::size_t a = 0; a < na; ++a) {
        Form dg = exterior_derivative(Form::function(chart, ansatz[a]));
        Form in_basis = basis.to_basis(dg);
        for (const auto& [idx, c] : in_basis.coeffs)
            comp[a][static_cast<std::size_t>(idx[0])] = c;
    }

    // per-slot constraint blocks: rows of "coefficient of full[s] in du is
    // identically zero", assembled exactly by matching monomials over a
    // common denominator
    auto slot_rows = [&](std::size_t s) {
        std::vector<Expr> pieces;
        for (std::size_t a = 0; a < na; ++a) pieces.push_back(comp[a][s]);
        AtomTable table = atom_table(pieces);
        std::vector<RatFun> fs;
        fs.reserve(na);
        for (std::size_t a = 0; a < na; ++a) fs.push_back(to_ratfun(comp[a][s], table));
        std::vector<std::pair<Poly, int>> lcd;
        for (const auto& f : fs)
            for (const auto& [fac, mult] : f.den) {
                bool found = false;
                for (auto& [g, mg] : lcd)
                    if (g == fac) {
                        mg = std::max(mg, mult);
                        found = true;
                    }
                if (!found) lcd.emplace_back(fac, mult);
            }
        std::map<Monomial, std::size_t> mono_index;
        std::vector<Poly> cleared(na);
        for (std::size_t a = 0; a < na; ++a) {
            Poly q = fs[a].num;
            for (const auto& [fac, mult] : lcd) {
                int have = 0;
                for (const auto& [g, mg] : fs[a].den)
                    if (g == fac) have = mg;
                for (int i = have; i < mult; ++i) q = q * fac;
            }
            for (const auto& [mon, c] : q.terms) mono_index.emplace(mon, mono_index.size());
            cleared[a] = std::move(q);
        }
        RatMat rows(mono_index.size(), RatVec(na, Rational(0)));
        for (std::size_t a = 0; a < na; ++a)
            for (const auto& [mon, c] : cleared[a].terms) rows[mono_index[mon]][a] = c;
        return rows;
    };
    std::vector<RatMat> blocks;
    blocks.reserve(static_cast<std::size_t>(dim));
    for (std::size_t s = 0; s < static_cast<std::size_t>(dim); ++s) blocks.push_back(slot_rows(s));

    // smallest candidate of the constrained nullspace whose W^{p+1}
    // component does not vanish
    auto try_select = [&](const RatMat& rows, std::size_t p) -> std::optional<Expr> {
        std::vector<RatVec> null =
            rat_nullspace(rows.empty() ? RatMat{RatVec(na, Rational(0))} : rows);
        RatMat cand(null.begin(), null.end());
        std::vector<int> pc;
        if (!cand.empty()) rat_rref(cand, pc);
        for (const auto& v : cand) {
            std::vector<Expr> terms;
            std::vector<Expr> wp_terms;
            for (std::size_t a = 0; a < na; ++a) {
                if (v[a] == 0) continue;
                terms.push_back(num(v[a]) * ansatz[a]);
                wp_terms.push_back(num(v[a]) * comp[a][p]);
            }
            if (terms.empty()) continue;
            Expr wp_coeff = add(std::move(wp_terms));
            bool nonzero;
            try {
                nonzero = !is_zero(wp_coeff, opts);
            } catch (const IndeterminateError&) {
                nonzero = true;
            }
            if (nonzero) return add(std::move(terms));
        }
        return std::nullopt;
    };

    for (std::size_t p = 0; p < m; ++p) {
        // du_p must have no component past slot p: neither on the later W's
        // nor on the complement
        RatMat rows;
        for (std::size_t s = p + 1; s < static_cast<std::size_t>(dim); ++s)
            rows.insert(rows.end(), blocks[s].begin(), blocks[s].end());
        if (!try_select(rows, p)) {
            out.failed_at = p;
            return out;
        }
        // sparsify: additionally force zero coefficients on earlier slots
        // wherever a candidate survives, so du_p touches as few of
        // W^1..W^{p} as possible and the classical representatives emerge
        for (std::size_t q = p; q-- > 0;) {
            RatMat trial = rows;
            trial.insert(trial.end(), blocks[q].begin(), blocks[q].end());
            if (try_select(trial, p)) rows = std::move(trial);
        }
        out.integrals.push_back(*try_select(rows, p));
    }
    return out;
}

} // namespace eds

#endif
