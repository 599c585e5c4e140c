#ifndef EDS_FORM_HPP
#define EDS_FORM_HPP

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "eds/linalg.hpp"

namespace eds {

/// Named coordinate chart.  All form computations are local to one chart.
struct Chart {
    std::string name;
    std::vector<std::string> coords;

    Chart() = default;
    Chart(std::string n, std::vector<std::string> c) : name(std::move(n)), coords(std::move(c)) {
        for (std::size_t i = 0; i < coords.size(); ++i)
            for (std::size_t j = i + 1; j < coords.size(); ++j)
                if (coords[i] == coords[j])
                    throw Error("chart '" + name + "' repeats coordinate " + coords[i]);
    }

    int dim() const { return static_cast<int>(coords.size()); }

    int index_of(const std::string& v) const {
        for (std::size_t i = 0; i < coords.size(); ++i)
            if (coords[i] == v) return static_cast<int>(i);
        throw Error("'" + v + "' is not a coordinate of chart " + name);
    }

    friend bool operator==(const Chart& a, const Chart& b) {
        return a.name == b.name && a.coords == b.coords;
    }
    friend bool operator!=(const Chart& a, const Chart& b) { return !(a == b); }
};

inline void require_same_chart(const Chart& a, const Chart& b, const char* op) {
    if (a != b) throw ChartError(std::string(op) + ": charts " + a.name + " and " + b.name + " differ");
}

/// Strictly increasing coordinate index tuple; the empty tuple indexes the
/// single coefficient of a 0-form.
using IndexTuple = std::vector<int>;

/// Degree-graded differential form with sparse coefficients.  Zero
/// coefficients (per is_zero) are pruned after every operation.
struct Form {
    Chart chart;
    int degree = 0;
    std::map<IndexTuple, Expr> coeffs;

    static Form zero_form(const Chart& ch, int degree) {
        Form f;
        f.chart = ch;
        f.degree = degree;
        return f;
    }

    static Form function(const Chart& ch, Expr e) {
        Form f;
        f.chart = ch;
        f.degree = 0;
        if (!is_zero_number(e)) f.coeffs.emplace(IndexTuple{}, std::move(e));
        return f;
    }

    static Form differential(const Chart& ch, int i) {
        Form f;
        f.chart = ch;
        f.degree = 1;
        f.coeffs.emplace(IndexTuple{i}, one());
        return f;
    }

    static Form differential(const Chart& ch, const std::string& coord) {
        return differential(ch, ch.index_of(coord));
    }

    bool is_structurally_zero() const { return coeffs.empty(); }

    Expr coefficient(const IndexTuple& idx) const {
        auto it = coeffs.find(idx);
        return it == coeffs.end() ? zero() : it->second;
    }

    /// Add a term with possibly unsorted indices; repeated indices kill it,
    /// sorting contributes the permutation sign.
    void accumulate(IndexTuple idx, const Expr& c) {
        if (is_zero_number(c)) return;
        int sign = 1;
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = i + 1; j < idx.size(); ++j) {
                if (idx[i] == idx[j]) return;
                if (idx[i] > idx[j]) sign = -sign;
            }
        std::sort(idx.begin(), idx.end());
        Expr add_c = sign > 0 ? c : -c;
        auto it = coeffs.find(idx);
        if (it == coeffs.end()) coeffs.emplace(std::move(idx), add_c);
        else {
            it->second = it->second + add_c;
            if (is_zero_number(it->second)) coeffs.erase(it);
        }
    }

    /// Drop coefficients that the zero test identifies as vanishing.
    Form& prune(const ZeroOptions& opts = default_zero_options()) {
        for (auto it = coeffs.begin(); it != coeffs.end();) {
            bool z;
            try {
                z = is_zero(it->second, opts);
            } catch (const IndeterminateError&) {
                z = false; // indeterminate counts as nonzero
            }
            if (z) it = coeffs.erase(it);
            else ++it;
        }
        return *this;
    }

    friend Form operator+(const Form& a, const Form& b) {
        require_same_chart(a.chart, b.chart, "form addition");
        if (a.degree != b.degree && !a.is_structurally_zero() && !b.is_structurally_zero())
            throw Error("cannot add forms of different degree");
        Form r = a;
        if (r.is_structurally_zero()) r.degree = b.degree;
        for (const auto& [idx, c] : b.coeffs) r.accumulate(idx, c);
        return r;
    }

    friend Form operator-(const Form& a, const Form& b) { return a + (num(-1L) * b); }

    friend Form operator*(const Expr& s, const Form& f) {
        Form r = f;
        for (auto it = r.coeffs.begin(); it != r.coeffs.end();) {
            it->second = s * it->second;
            if (is_zero_number(it->second)) it = r.coeffs.erase(it);
            else ++it;
        }
        return r;
    }

    friend Form operator*(const Form& f, const Expr& s) { return s * f; }
};

/// Graded wedge product.
inline Form wedge(const Form& a, const Form& b) {
    require_same_chart(a.chart, b.chart, "wedge");
    Form r = Form::zero_form(a.chart, a.degree + b.degree);
    for (const auto& [ia, ca] : a.coeffs)
        for (const auto& [ib, cb] : b.coeffs) {
            IndexTuple idx = ia;
            idx.insert(idx.end(), ib.begin(), ib.end());
            r.accumulate(std::move(idx), ca * cb);
        }
    return r.prune();
}

/// Exterior derivative.
inline Form exterior_derivative(const Form& f) {
    Form r = Form::zero_form(f.chart, f.degree + 1);
    for (const auto& [idx, c] : f.coeffs) {
        for (int v = 0; v < f.chart.dim(); ++v) {
            Expr dc = differentiate(c, f.chart.coords[static_cast<std::size_t>(v)]);
            if (is_zero_number(dc)) continue;
            IndexTuple nidx;
            nidx.push_back(v);
            nidx.insert(nidx.end(), idx.begin(), idx.end());
            r.accumulate(std::move(nidx), dc);
        }
    }
    return r.prune();
}

/// Vector field on a chart: one component expression per coordinate.
struct VectorField {
    Chart chart;
    std::vector<Expr> components;

    VectorField(Chart ch, std::vector<Expr> comps)
        : chart(std::move(ch)), components(std::move(comps)) {
        if (static_cast<int>(components.size()) != chart.dim())
            throw Error("vector field component count does not match chart dimension");
    }

    static VectorField coordinate(const Chart& ch, const std::string& coord) {
        std::vector<Expr> comps(static_cast<std::size_t>(ch.dim()), zero());
        comps[static_cast<std::size_t>(ch.index_of(coord))] = one();
        return VectorField(ch, std::move(comps));
    }
};

/// Interior product (contraction in the first slot).
inline Form interior_product(const VectorField& x, const Form& f) {
    require_same_chart(x.chart, f.chart, "interior product");
    if (f.degree < 1) throw Error("interior product needs a form of degree >= 1");
    Form r = Form::zero_form(f.chart, f.degree - 1);
    for (const auto& [idx, c] : f.coeffs) {
        for (std::size_t j = 0; j < idx.size(); ++j) {
            const Expr& comp = x.components[static_cast<std::size_t>(idx[j])];
            if (is_zero_number(comp)) continue;
            IndexTuple rest;
            for (std::size_t k = 0; k < idx.size(); ++k)
                if (k != j) rest.push_back(idx[k]);
            Expr term = (j % 2 == 0 ? c : -c) * comp;
            r.accumulate(std::move(rest), term);
        }
    }
    return r.prune();
}

/// Differentiable map between charts: one expression in source coordinates
/// per target coordinate.  Houses immersions and group translations.
struct ChartMap {
    Chart source;
    Chart target;
    std::vector<Expr> components;

    ChartMap(Chart s, Chart t, std::vector<Expr> comps)
        : source(std::move(s)), target(std::move(t)), components(std::move(comps)) {
        if (static_cast<int>(components.size()) != target.dim())
            throw Error("chart map component count does not match target dimension");
    }

    static ChartMap identity(const Chart& ch) {
        std::vector<Expr> comps;
        for (const auto& c : ch.coords) comps.push_back(sym(c));
        return ChartMap(ch, ch, std::move(comps));
    }

    /// Substitution of target coordinates by the map components.
    Expr pull_scalar(const Expr& e) const {
        std::map<std::string, Expr> bind;
        for (int i = 0; i < target.dim(); ++i)
            bind.emplace(target.coords[static_cast<std::size_t>(i)],
                         components[static_cast<std::size_t>(i)]);
        return substitute(e, bind);
    }
};

/// wedge that treats a 0-form factor as scalar multiplication
inline Form wedge_or_scale(const Form& a, const Form& b) {
    if (a.degree == 0) {
        Expr s = a.coefficient({});
        return s * b;
    }
    if (b.degree == 0) {
        Expr s = b.coefficient({});
        return s * a;
    }
    return wedge(a, b);
}

/// Pullback along a chart map; an algebra homomorphism commuting with d.
inline Form pullback(const ChartMap& phi, const Form& f) {
    require_same_chart(phi.target, f.chart, "pullback");
    // differentials of the components, computed once
    std::vector<Form> dcomp;
    dcomp.reserve(phi.components.size());
    for (const auto& c : phi.components) {
        Form df = Form::zero_form(phi.source, 1);
        for (int v = 0; v < phi.source.dim(); ++v) {
            Expr dc = differentiate(c, phi.source.coords[static_cast<std::size_t>(v)]);
            if (!is_zero_number(dc)) df.accumulate(IndexTuple{v}, dc);
        }
        dcomp.push_back(std::move(df));
    }
    Form r = Form::zero_form(phi.source, f.degree);
    for (const auto& [idx, c] : f.coeffs) {
        Form term = Form::function(phi.source, phi.pull_scalar(c));
        for (int i : idx) term = wedge_or_scale(term, dcomp[static_cast<std::size_t>(i)]);
        r = r + term;
    }
    return r.prune();
}

/// Coefficient matrix of a list of 1-forms: row i holds the dx-components of
/// forms[i].
inline ExprMat coefficient_matrix(const std::vector<Form>& forms) {
    if (forms.empty()) return {};
    const Chart& ch = forms[0].chart;
    ExprMat m = expr_mat(forms.size(), static_cast<std::size_t>(ch.dim()));
    for (std::size_t i = 0; i < forms.size(); ++i) {
        require_same_chart(forms[i].chart, ch, "coefficient matrix");
        if (forms[i].degree != 1 && !forms[i].is_structurally_zero())
            throw Error("coefficient matrix expects 1-forms");
        for (const auto& [idx, c] : forms[i].coeffs) m[i][static_cast<std::size_t>(idx[0])] = c;
    }
    return m;
}

/// Express a 1-form in a full coframe: returns c with omega = sum c_i w_i.
/// The coframe must consist of chart-dimension many independent 1-forms.
inline ExprVec express_in_coframe(const Form& omega, const std::vector<Form>& coframe,
                                  Assumptions* asmp = nullptr,
                                  const ZeroOptions& opts = default_zero_options()) {
    if (omega.degree != 1 && !omega.is_structurally_zero())
        throw Error("express_in_coframe expects a 1-form");
    const Chart& ch = omega.chart;
    if (static_cast<int>(coframe.size()) != ch.dim())
        throw SingularError("coframe size does not match chart dimension");
    ExprMat a = coefficient_matrix(coframe);
    // solve A^T c = omega
    ExprMat at = expr_mat(a[0].size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[0].size(); ++j) at[j][i] = a[i][j];
    ExprVec rhs(static_cast<std::size_t>(ch.dim()), zero());
    for (const auto& [idx, c] : omega.coeffs) rhs[static_cast<std::size_t>(idx[0])] = c;
    std::optional<ExprVec> x;
    try {
        x = solve_linear(at, rhs, asmp, opts);
    } catch (const SingularError&) {
        throw SingularError("dependent coframe");
    }
    if (!x) throw SingularError("form does not lie in the span of the coframe");
    return *x;
}

/// A full coframe together with the inverse change of basis.  Rewrites forms
/// of any degree between coordinate components and coframe components.
class CoframeBasis {
public:
    CoframeBasis(std::vector<Form> coframe, std::vector<std::string> labels,
                 Assumptions* asmp = nullptr, const ZeroOptions& opts = default_zero_options())
        : coframe_(std::move(coframe)) {
        if (coframe_.empty()) throw Error("empty coframe");
        chart_ = coframe_[0].chart;
        if (static_cast<int>(coframe_.size()) != chart_.dim())
            throw SingularError("coframe size does not match chart dimension");
        if (labels.empty())
            for (std::size_t i = 0; i < coframe_.size(); ++i)
                labels.push_back("w" + std::to_string(i + 1));
        label_chart_ = Chart(chart_.name + "#coframe", labels);
        matrix_ = coefficient_matrix(coframe_);
        try {
            inverse_ = inverse(matrix_, asmp, opts);
        } catch (const SingularError&) {
            throw SingularError("dependent coframe");
        }
    }

    const Chart& chart() const { return chart_; }
    const Chart& label_chart() const { return label_chart_; }
    const std::vector<Form>& forms() const { return coframe_; }

    /// Rewrite a coordinate form in coframe components.  The result lives on
    /// the label chart; its coefficients remain functions of the original
    /// coordinates.
    Form to_basis(const Form& f) const {
        require_same_chart(f.chart, chart_, "to_basis");
        // dx_j = sum_i inverse_[j][i] W_i
        std::vector<Form> repl;
        for (int j = 0; j < chart_.dim(); ++j) {
            Form fj = Form::zero_form(label_chart_, 1);
            for (int i = 0; i < chart_.dim(); ++i) {
                const Expr& c = inverse_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
                if (!is_zero_number(c)) fj.accumulate(IndexTuple{i}, c);
            }
            repl.push_back(std::move(fj));
        }
        return substitute_differentials(f, label_chart_, repl);
    }

    /// Expand a label-chart form back into coordinates.
    Form from_basis(const Form& f) const {
        require_same_chart(f.chart, label_chart_, "from_basis");
        return substitute_differentials(f, chart_, coframe_);
    }

private:
    Chart chart_;
    Chart label_chart_;
    std::vector<Form> coframe_;
    ExprMat matrix_;
    ExprMat inverse_;

    /// Multilinear substitution d(coord_i) -> repl[i]; coefficients carried
    /// over untouched.
    static Form substitute_differentials(const Form& f, const Chart& onto,
                                         const std::vector<Form>& repl) {
        Form r = Form::zero_form(onto, f.degree);
        for (const auto& [idx, c] : f.coeffs) {
            Form term = Form::function(onto, c);
            for (int i : idx) term = wedge_or_scale(term, repl[static_cast<std::size_t>(i)]);
            r = r + term;
        }
        return r.prune();
    }
};

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

inline std::string to_string(const Form& f) {
    if (f.coeffs.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [idx, c] : f.coeffs) {
        std::string basis;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (k) basis += "^";
            basis += "d" + f.chart.coords[static_cast<std::size_t>(idx[k])];
        }
        std::string coeff;
        bool is_neg_one = c->kind == Kind::Number && c->number == -1;
        bool is_one = is_one_number(c);
        if (idx.empty()) {
            coeff = to_string(c);
        } else if (is_one) {
            coeff = "";
        } else if (is_neg_one) {
            coeff = "-";
        } else if (c->kind == Kind::Number || c->kind == Kind::Symbol ||
                   c->kind == Kind::Power || c->kind == Kind::Call ||
                   c->kind == Kind::Product) {
            coeff = detail::print_impl(c, 2);
            coeff += "*";
        } else {
            coeff = "(" + to_string(c) + ")*";
        }
        if (!first) {
            if (!coeff.empty() && coeff[0] == '-') {
                s += " - ";
                coeff = coeff.substr(1);
            } else {
                s += " + ";
            }
        }
        s += coeff + basis;
        first = false;
    }
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const Form& f) { return os << to_string(f); }

} // namespace eds

#endif
