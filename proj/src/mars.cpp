#include "skillmeta/mars.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace skillmeta {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelTol = 1e-9;    // relative degeneracy guard in gain formulas
constexpr double kOrthTol = 1e-10;  // acceptance threshold for new basis columns

using RowMajorMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double eval_factor(const BasisFactor& f, double x) {
    switch (f.kind) {
        case FactorKind::HingePlus: return std::max(x - f.knot, 0.0);
        case FactorKind::HingeMinus: return std::max(f.knot - x, 0.0);
        case FactorKind::Indicator: return x;
    }
    return 0;
}

double gcv_value(double rss, double n, double n_coef, double n_knots, double penalty) {
    const double c = n_coef + penalty * n_knots;
    if (c >= n) return kInf;
    const double d = 1.0 - c / n;
    return (rss / n) / (d * d);
}

std::size_t count_knots(const std::vector<BasisTerm>& terms) {
    std::set<std::pair<std::string, double>> knots;
    for (const auto& t : terms)
        for (const auto& f : t.factors)
            if (f.kind != FactorKind::Indicator) knots.insert({f.variable, f.knot});
    return knots.size();
}

// Greedy basis construction state. Column 0 of the basis is the intercept;
// term k lives in column k+1. Q holds the same span orthonormalized in
// insertion order, which makes the RSS of the refit model available as
// y'y - sum of squared projections.
class ForwardState {
public:
    ForwardState(const DesignMatrix& m, const MarsConfig& cfg)
        : m_(m), cfg_(cfg), n_(m.n()), p_(m.p()) {
        if (cfg.max_degree < 1 || cfg.max_degree > 2)
            throw std::invalid_argument("max_degree must be 1 or 2");
        if (cfg.max_terms < 1) throw std::invalid_argument("max_terms must be positive");
        if (cfg.min_rsq_gain < 0) throw std::invalid_argument("min_rsq_gain must be non-negative");
        if (n_ < 10) throw std::invalid_argument("forward pass needs at least 10 rows");
        const Eigen::Index max_cols = 2 + cfg.max_terms;
        B_.resize(n_, max_cols);
        Q_.resize(n_, max_cols);
        yq_.resize(static_cast<std::size_t>(max_cols));

        B_.col(0).setOnes();
        Q_.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n_)));
        yq_[0] = Q_.col(0).dot(m_.y);
        cols_ = 1;
        yty_ = m_.y.squaredNorm();
        tss_ = yty_ - yq_[0] * yq_[0];
        rss_ = tss_;

        sort_orders();
    }

    void seed(const std::vector<BasisTerm>& terms) {
        for (const auto& t : terms)
            if (!append_term(t, term_column(t)))
                throw std::runtime_error("degenerate seed term");
    }

    void run() {
        while (step()) {
        }
    }

    const std::vector<BasisTerm>& terms() const { return terms_; }
    const std::vector<std::uint8_t>& addition_sizes() const { return addition_sizes_; }

    MarsModel to_model() const {
        MarsModel model;
        model.config = cfg_;
        model.variable_names = m_.column_names;
        model.n_train = static_cast<std::size_t>(n_);
        model.tss = tss_;
        model.terms = terms_;

        const Eigen::MatrixXd Bv = B_.leftCols(cols_);
        const Eigen::VectorXd beta = Eigen::HouseholderQR<Eigen::MatrixXd>(Bv).solve(m_.y);
        model.intercept = beta(0);
        for (std::size_t k = 0; k < terms_.size(); ++k)
            model.terms[k].coefficient = beta(static_cast<Eigen::Index>(k) + 1);
        model.rss = (m_.y - Bv * beta).squaredNorm();
        model.rsq = tss_ > 0 ? 1.0 - model.rss / tss_ : 0.0;

        const double n = static_cast<double>(n_);
        const double penalty = cfg_.knot_penalty();
        model.gcv = gcv_value(model.rss, n, 1.0 + static_cast<double>(terms_.size()),
                              static_cast<double>(count_knots(terms_)), penalty);
        const double gcv0 = gcv_value(tss_, n, 1.0, 0.0, penalty);
        model.grsq = gcv0 > 0 && std::isfinite(model.gcv) ? 1.0 - model.gcv / gcv0 : 0.0;
        return model;
    }

private:
    struct Candidate {
        double gain = 0;
        int parent = -1;  // -1 = intercept
        int var = -1;
        double knot = 0;
        enum class Shape { None, Pair, Linear, Indicator };
        Shape shape = Shape::None;
    };

    // Larger gain wins; ties prefer the smaller knot, then the earlier
    // design column, then the earlier parent.
    static bool better(const Candidate& a, const Candidate& b) {
        if (a.shape == Candidate::Shape::None) return false;
        if (b.shape == Candidate::Shape::None) return true;
        if (a.gain != b.gain) return a.gain > b.gain;
        if (a.knot != b.knot) return a.knot < b.knot;
        if (a.var != b.var) return a.var < b.var;
        return a.parent < b.parent;
    }

    void sort_orders() {
        order_.assign(static_cast<std::size_t>(p_), {});
        for (Eigen::Index v = 0; v < p_; ++v) {
            if (m_.is_dummy[static_cast<std::size_t>(v)]) continue;
            auto& ord = order_[static_cast<std::size_t>(v)];
            ord.resize(static_cast<std::size_t>(n_));
            std::iota(ord.begin(), ord.end(), 0);
            const auto col = m_.X.col(v);
            std::stable_sort(ord.begin(), ord.end(),
                             [&](int a, int b) { return col(a) < col(b); });
        }
    }

    Eigen::VectorXd term_column(const BasisTerm& term) const {
        Eigen::VectorXd col = Eigen::VectorXd::Ones(n_);
        for (const auto& f : term.factors) {
            const auto v = static_cast<Eigen::Index>(m_.column_index(f.variable));
            for (Eigen::Index i = 0; i < n_; ++i) col(i) *= eval_factor(f, m_.X(i, v));
        }
        return col;
    }

    bool append_term(const BasisTerm& term, const Eigen::VectorXd& col) {
        const double norm = col.norm();
        if (!(norm > 0)) return false;
        Eigen::VectorXd r = col;
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index j = 0; j < cols_; ++j) r -= Q_.col(j).dot(r) * Q_.col(j);
        const double rnorm = r.norm();
        if (rnorm <= kOrthTol * norm) return false;

        B_.col(cols_) = col;
        Q_.col(cols_) = r / rnorm;
        yq_[static_cast<std::size_t>(cols_)] = Q_.col(cols_).dot(m_.y);
        ++cols_;
        terms_.push_back(term);
        return true;
    }

    bool step() {
        const int remaining = cfg_.max_terms - static_cast<int>(terms_.size());
        if (remaining <= 0 || tss_ <= 0) return false;
        const bool allow_pairs = remaining >= 2;

        std::vector<int> parents;
        parents.push_back(-1);
        for (std::size_t k = 0; k < terms_.size(); ++k)
            if (terms_[k].degree() < cfg_.max_degree) parents.push_back(static_cast<int>(k));

        std::vector<Candidate> results(parents.size());
        auto worker = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                results[i] = best_for_parent(parents[i], allow_pairs);
        };
        if (parents.size() >= 8) {
            const std::size_t mid = parents.size() / 2;
            auto fut = std::async(std::launch::async, worker, mid, parents.size());
            worker(0, mid);
            fut.get();
        } else {
            worker(0, parents.size());
        }

        Candidate best;
        for (const auto& c : results)
            if (better(c, best)) best = c;

        if (best.shape == Candidate::Shape::None || best.gain <= 0) return false;
        if (best.gain / tss_ < cfg_.min_rsq_gain) return false;

        const std::string& vname = m_.column_names[static_cast<std::size_t>(best.var)];
        const std::vector<BasisFactor> parent_factors =
            best.parent < 0 ? std::vector<BasisFactor>{}
                            : terms_[static_cast<std::size_t>(best.parent)].factors;
        auto make_term = [&](FactorKind kind) {
            BasisTerm t;
            t.factors = parent_factors;
            t.factors.push_back({kind, vname, best.knot});
            return t;
        };

        int added = 0;
        switch (best.shape) {
            case Candidate::Shape::Indicator: {
                const BasisTerm t = make_term(FactorKind::Indicator);
                if (append_term(t, term_column(t))) ++added;
                break;
            }
            case Candidate::Shape::Linear: {
                const BasisTerm t = make_term(FactorKind::HingePlus);
                if (append_term(t, term_column(t))) ++added;
                break;
            }
            case Candidate::Shape::Pair: {
                const BasisTerm plus = make_term(FactorKind::HingePlus);
                const BasisTerm minus = make_term(FactorKind::HingeMinus);
                if (append_term(plus, term_column(plus))) ++added;
                if (append_term(minus, term_column(minus))) ++added;
                break;
            }
            case Candidate::Shape::None: break;
        }
        if (added == 0) return false;
        addition_sizes_.push_back(static_cast<std::uint8_t>(added));

        double proj = 0;
        for (Eigen::Index j = 1; j < cols_; ++j) proj += yq_[static_cast<std::size_t>(j)] *
                                                         yq_[static_cast<std::size_t>(j)];
        rss_ = tss_ - proj;
        return true;
    }

    Candidate best_for_parent(int parent, bool allow_pairs) const {
        const Eigen::Index bcol = parent + 1;
        std::vector<int> sup;
        sup.reserve(static_cast<std::size_t>(n_));
        for (Eigen::Index i = 0; i < n_; ++i)
            if (B_(i, bcol) != 0) sup.push_back(static_cast<int>(i));
        if (sup.empty()) return {};

        std::vector<char> in_parent(static_cast<std::size_t>(p_), 0);
        if (parent >= 0)
            for (const auto& f : terms_[static_cast<std::size_t>(parent)].factors)
                in_parent[m_.column_index(f.variable)] = 1;

        const Eigen::VectorXd yqv =
            Eigen::Map<const Eigen::VectorXd>(yq_.data(), cols_);

        Candidate best;
        for (int v = 0; v < static_cast<int>(p_); ++v) {
            if (in_parent[static_cast<std::size_t>(v)]) continue;
            Candidate c = m_.is_dummy[static_cast<std::size_t>(v)]
                              ? scan_indicator(parent, v, bcol, sup, yqv)
                              : scan_numeric(parent, v, bcol, sup, yqv, allow_pairs);
            if (better(c, best)) best = c;
        }
        return best;
    }

    Candidate scan_indicator(int parent, int v, Eigen::Index bcol, const std::vector<int>& sup,
                             const Eigen::VectorXd& yqv) const {
        const auto x = m_.X.col(v);
        Eigen::VectorXd cc = Eigen::VectorXd::Zero(cols_);
        double cn2 = 0, cy = 0;
        for (int i : sup) {
            if (x(i) == 0) continue;
            const double b = B_(i, bcol);
            cc += b * Q_.row(i).head(cols_).transpose();
            cn2 += b * b;
            cy += b * m_.y(i);
        }
        if (cn2 <= 0) return {};
        const double den = cn2 - cc.squaredNorm();
        if (den <= kRelTol * cn2) return {};
        const double num = cy - cc.dot(yqv);

        Candidate c;
        c.gain = num * num / den;
        c.parent = parent;
        c.var = v;
        c.shape = Candidate::Shape::Indicator;
        return c;
    }

    // Sweeps every distinct observed value of variable v as a knot for the
    // reflected hinge pair on the given parent. The pair's RSS reduction
    // splits into the gain of the linear term b*x plus the gain of the
    // lower hinge b*max(t-x, 0) given that linear term, so one ascending
    // pass with running sums prices every knot in O(model size).
    Candidate scan_numeric(int parent, int v, Eigen::Index bcol, const std::vector<int>& sup,
                           const Eigen::VectorXd& yqv, bool allow_pairs) const {
        const auto x = m_.X.col(v);
        const auto& ord = order_[static_cast<std::size_t>(v)];

        Eigen::VectorXd cw = Eigen::VectorXd::Zero(cols_);
        double wn2 = 0, wy = 0;
        for (int i : sup) {
            const double w = B_(i, bcol) * x(i);
            if (w == 0) continue;
            cw += w * Q_.row(i).head(cols_).transpose();
            wn2 += w * w;
            wy += w * m_.y(i);
        }

        const bool lin_ok = wn2 > 0 && (wn2 - cw.squaredNorm()) > kRelTol * wn2;
        const double rw2 = lin_ok ? wn2 - cw.squaredNorm() : 0;
        const double rw = lin_ok ? std::sqrt(rw2) : 0;
        const double ylin = lin_ok ? wy - cw.dot(yqv) : 0;
        const double gain_lin = lin_ok ? ylin * ylin / rw2 : 0;

        Candidate best;
        if (lin_ok) {
            best.gain = gain_lin;
            best.parent = parent;
            best.var = v;
            best.knot = x(ord.front());  // hinge at the smallest observed value
            best.shape = Candidate::Shape::Linear;
        }
        if (!allow_pairs) return best;

        Eigen::VectorXd sq = Eigen::VectorXd::Zero(cols_);
        Eigen::VectorXd sxq = Eigen::VectorXd::Zero(cols_);
        Eigen::VectorXd c(cols_);
        double sb2 = 0, sb2x = 0, sb2x2 = 0, sby = 0, sbxy = 0;
        std::size_t acc = 0;

        std::size_t pos = 0;
        while (pos < ord.size()) {
            const double t = x(ord[pos]);

            if (acc > 0) {
                c.noalias() = t * sq - sxq;
                const double hn2 = t * t * sb2 - 2 * t * sb2x + sb2x2;
                double num = t * sby - sbxy - c.dot(yqv);
                double den = hn2 - c.squaredNorm();
                if (lin_ok) {
                    const double chw = (t * sb2x - sb2x2 - cw.dot(c)) / rw;
                    num -= chw * (ylin / rw);
                    den -= chw * chw;
                }
                if (hn2 > 0 && den > kRelTol * hn2) {
                    Candidate cand;
                    cand.gain = gain_lin + num * num / den;
                    cand.parent = parent;
                    cand.var = v;
                    cand.knot = t;
                    cand.shape = Candidate::Shape::Pair;
                    if (better(cand, best)) best = cand;
                }
            }

            // absorb the whole group of rows sharing this value
            while (pos < ord.size() && x(ord[pos]) == t) {
                const int i = ord[pos];
                const double b = B_(i, bcol);
                if (b != 0) {
                    sq += b * Q_.row(i).head(cols_).transpose();
                    sxq += (b * x(i)) * Q_.row(i).head(cols_).transpose();
                    sb2 += b * b;
                    sb2x += b * b * x(i);
                    sb2x2 += b * b * x(i) * x(i);
                    sby += b * m_.y(i);
                    sbxy += b * x(i) * m_.y(i);
                    ++acc;
                }
                ++pos;
            }
        }
        return best;
    }

    const DesignMatrix& m_;
    MarsConfig cfg_;
    Eigen::Index n_;
    Eigen::Index p_;
    Eigen::MatrixXd B_;
    RowMajorMat Q_;
    Eigen::Index cols_ = 0;
    std::vector<double> yq_;
    double yty_ = 0;
    double tss_ = 0;
    double rss_ = 0;
    std::vector<BasisTerm> terms_;
    std::vector<std::uint8_t> addition_sizes_;
    std::vector<std::vector<int>> order_;
};

Eigen::MatrixXd build_basis(const std::vector<BasisTerm>& terms, const DesignMatrix& m) {
    const Eigen::Index n = m.n();
    Eigen::MatrixXd B(n, static_cast<Eigen::Index>(terms.size()) + 1);
    B.col(0).setOnes();
    for (std::size_t k = 0; k < terms.size(); ++k) {
        Eigen::VectorXd col = Eigen::VectorXd::Ones(n);
        for (const auto& f : terms[k].factors) {
            const auto v = static_cast<Eigen::Index>(m.column_index(f.variable));
            for (Eigen::Index i = 0; i < n; ++i) col(i) *= eval_factor(f, m.X(i, v));
        }
        B.col(static_cast<Eigen::Index>(k) + 1) = col;
    }
    return B;
}

MarsModel refit_terms(std::vector<BasisTerm> terms, const DesignMatrix& m,
                      const MarsConfig& cfg) {
    const Eigen::MatrixXd B = build_basis(terms, m);
    const Eigen::VectorXd beta = Eigen::HouseholderQR<Eigen::MatrixXd>(B).solve(m.y);

    MarsModel model;
    model.config = cfg;
    model.variable_names = m.column_names;
    model.n_train = static_cast<std::size_t>(m.n());
    model.intercept = beta(0);
    model.terms = std::move(terms);
    for (std::size_t k = 0; k < model.terms.size(); ++k)
        model.terms[k].coefficient = beta(static_cast<Eigen::Index>(k) + 1);

    model.rss = (m.y - B * beta).squaredNorm();
    model.tss = (m.y.array() - m.y.mean()).matrix().squaredNorm();
    model.rsq = model.tss > 0 ? 1.0 - model.rss / model.tss : 0.0;

    const double n = static_cast<double>(m.n());
    const double penalty = cfg.knot_penalty();
    model.gcv = gcv_value(model.rss, n, 1.0 + static_cast<double>(model.terms.size()),
                          static_cast<double>(count_knots(model.terms)), penalty);
    const double gcv0 = gcv_value(model.tss, n, 1.0, 0.0, penalty);
    model.grsq = gcv0 > 0 && std::isfinite(model.gcv) ? 1.0 - model.gcv / gcv0 : 0.0;
    return model;
}

std::string format_number(double v) { return fmt::format("{}", v); }

}  // namespace

std::size_t MarsModel::knot_count() const { return count_knots(terms); }

double eval_term(const BasisTerm& term, const Eigen::RowVectorXd& row,
                 const std::vector<std::string>& names) {
    double out = 1.0;
    for (const auto& f : term.factors) {
        auto it = std::find(names.begin(), names.end(), f.variable);
        if (it == names.end())
            throw std::invalid_argument(fmt::format("unknown variable: {}", f.variable));
        out *= eval_factor(f, row(static_cast<Eigen::Index>(it - names.begin())));
    }
    return out;
}

MarsModel forward_pass(const DesignMatrix& matrix, const MarsConfig& config) {
    ForwardState state(matrix, config);
    state.run();
    return state.to_model();
}

MarsModel backward_prune(const MarsModel& model, const DesignMatrix& matrix) {
    const std::size_t m = model.terms.size();
    const double n = static_cast<double>(matrix.n());
    const double penalty = model.config.knot_penalty();

    const Eigen::MatrixXd B = build_basis(model.terms, matrix);
    Eigen::MatrixXd G = B.transpose() * B;
    const Eigen::VectorXd g = B.transpose() * matrix.y;
    const double yty = matrix.y.squaredNorm();
    // tiny ridge keeps the Gram solves defined when terms duplicate
    G.diagonal().array() += 1e-12 * (G.trace() / static_cast<double>(G.rows()));

    std::vector<int> current(m);
    std::iota(current.begin(), current.end(), 0);

    struct Visited {
        std::vector<int> subset;
        double gcv;
    };
    std::vector<Visited> visited;

    while (true) {
        const Eigen::Index d = static_cast<Eigen::Index>(current.size()) + 1;
        Eigen::MatrixXd Gs(d, d);
        Eigen::VectorXd gs(d);
        auto col_of = [&](Eigen::Index k) {
            return k == 0 ? 0 : static_cast<Eigen::Index>(current[static_cast<std::size_t>(k - 1)]) + 1;
        };
        for (Eigen::Index a = 0; a < d; ++a) {
            gs(a) = g(col_of(a));
            for (Eigen::Index b = 0; b < d; ++b) Gs(a, b) = G(col_of(a), col_of(b));
        }
        const Eigen::MatrixXd A = Gs.inverse();
        const Eigen::VectorXd beta = A * gs;
        const double rss = std::max(yty - gs.dot(beta), 0.0);

        std::vector<BasisTerm> subset_terms;
        for (int idx : current) subset_terms.push_back(model.terms[static_cast<std::size_t>(idx)]);
        const double gcv = gcv_value(rss, n, static_cast<double>(d),
                                     static_cast<double>(count_knots(subset_terms)), penalty);
        visited.push_back({current, gcv});

        if (current.empty()) break;

        // cheapest deletion: removing column k raises RSS by beta_k^2 / A_kk
        Eigen::Index drop = 1;
        double best = kInf;
        for (Eigen::Index k = 1; k < d; ++k) {
            const double delta = beta(k) * beta(k) / A(k, k);
            if (delta < best) {
                best = delta;
                drop = k;
            }
        }
        current.erase(current.begin() + (drop - 1));
    }

    const Visited* winner = &visited.front();
    for (const auto& v : visited)
        if (v.gcv < winner->gcv ||
            (v.gcv == winner->gcv && v.subset.size() < winner->subset.size()))
            winner = &v;

    std::vector<BasisTerm> kept;
    kept.reserve(winner->subset.size());
    for (int idx : winner->subset) kept.push_back(model.terms[static_cast<std::size_t>(idx)]);
    return refit_terms(std::move(kept), matrix, model.config);
}

MarsModel fit_mars(const DesignMatrix& matrix, const MarsConfig& config) {
    return backward_prune(forward_pass(matrix, config), matrix);
}

Eigen::VectorXd predict(const MarsModel& model, const Eigen::MatrixXd& rows,
                        const std::vector<std::string>& names) {
    struct ResolvedFactor {
        FactorKind kind;
        Eigen::Index col;
        double knot;
    };
    std::vector<std::vector<ResolvedFactor>> resolved(model.terms.size());
    for (std::size_t k = 0; k < model.terms.size(); ++k) {
        for (const auto& f : model.terms[k].factors) {
            auto it = std::find(names.begin(), names.end(), f.variable);
            if (it == names.end())
                throw std::invalid_argument(fmt::format("unknown variable: {}", f.variable));
            resolved[k].push_back({f.kind, static_cast<Eigen::Index>(it - names.begin()), f.knot});
        }
    }

    Eigen::VectorXd out = Eigen::VectorXd::Constant(rows.rows(), model.intercept);
    for (std::size_t k = 0; k < model.terms.size(); ++k) {
        const double coef = model.terms[k].coefficient;
        for (Eigen::Index i = 0; i < rows.rows(); ++i) {
            double v = 1.0;
            for (const auto& f : resolved[k]) {
                const double x = rows(i, f.col);
                v *= f.kind == FactorKind::HingePlus    ? std::max(x - f.knot, 0.0)
                     : f.kind == FactorKind::HingeMinus ? std::max(f.knot - x, 0.0)
                                                        : x;
            }
            out(i) += coef * v;
        }
    }
    return out;
}

Eigen::VectorXd predict(const MarsModel& model, const DesignMatrix& matrix) {
    return predict(model, matrix.X, matrix.column_names);
}

CvResult cross_validate(const DesignMatrix& matrix, const std::vector<MarsConfig>& grid) {
    if (grid.empty()) throw std::invalid_argument("empty configuration grid");
    const MarsConfig& base = grid.front();
    const int folds = base.cv_folds;
    const Eigen::Index n = matrix.n();
    if (folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
    if (n < folds) throw std::invalid_argument("fewer rows than folds");

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(base.rng_seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> fold_of(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < perm.size(); ++i)
        fold_of[static_cast<std::size_t>(perm[i])] = static_cast<int>(i) % folds;

    auto select_rows = [&](const std::vector<int>& rows) {
        DesignMatrix sub;
        sub.column_names = matrix.column_names;
        sub.is_dummy = matrix.is_dummy;
        sub.has_intercept = matrix.has_intercept;
        sub.baselines = matrix.baselines;
        sub.X.resize(static_cast<Eigen::Index>(rows.size()), matrix.p());
        sub.y.resize(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            sub.X.row(static_cast<Eigen::Index>(i)) = matrix.X.row(rows[i]);
            sub.y(static_cast<Eigen::Index>(i)) = matrix.y(rows[i]);
        }
        return sub;
    };

    std::vector<DesignMatrix> train(static_cast<std::size_t>(folds));
    std::vector<DesignMatrix> test(static_cast<std::size_t>(folds));
    for (int f = 0; f < folds; ++f) {
        std::vector<int> tr, te;
        for (Eigen::Index i = 0; i < n; ++i)
            (fold_of[static_cast<std::size_t>(i)] == f ? te : tr).push_back(static_cast<int>(i));
        if (te.empty()) throw std::runtime_error(fmt::format("fold {} has zero rows", f));
        train[static_cast<std::size_t>(f)] = select_rows(tr);
        test[static_cast<std::size_t>(f)] = select_rows(te);
    }

    CvResult result;
    result.table.resize(grid.size());
    for (std::size_t e = 0; e < grid.size(); ++e) {
        result.table[e].config = grid[e];
        result.table[e].fold_rmse.assign(static_cast<std::size_t>(folds), 0.0);
    }

    // Group grid entries by degree: within one degree the greedy forward
    // sequence is nested across max_terms, so each fold needs one long
    // forward pass plus a short capacity-edge step per grid entry.
    std::vector<int> degrees;
    for (const auto& cfg : grid)
        if (std::find(degrees.begin(), degrees.end(), cfg.max_degree) == degrees.end())
            degrees.push_back(cfg.max_degree);

    for (int degree : degrees) {
        std::vector<std::size_t> entries;
        int max_k = 0;
        for (std::size_t e = 0; e < grid.size(); ++e)
            if (grid[e].max_degree == degree) {
                entries.push_back(e);
                max_k = std::max(max_k, grid[e].max_terms);
            }

        auto run_fold = [&](int f) {
            const DesignMatrix& tr = train[static_cast<std::size_t>(f)];
            const DesignMatrix& te = test[static_cast<std::size_t>(f)];

            MarsConfig master_cfg = grid[entries.front()];
            master_cfg.max_degree = degree;
            master_cfg.max_terms = max_k;
            ForwardState master(tr, master_cfg);
            master.run();
            const auto& sizes = master.addition_sizes();
            const auto& all_terms = master.terms();

            for (std::size_t e : entries) {
                const int k = grid[e].max_terms;
                std::size_t cum = 0, used = 0;
                while (used < sizes.size() && cum + sizes[used] <= static_cast<std::size_t>(k)) {
                    cum += sizes[used];
                    ++used;
                }
                std::vector<BasisTerm> prefix(all_terms.begin(),
                                              all_terms.begin() + static_cast<long>(cum));

                MarsConfig cfg_k = grid[e];
                MarsModel unpruned;
                if (used < sizes.size() && cum < static_cast<std::size_t>(k)) {
                    // one slot left where the master added a pair: rerun the
                    // final step under the tighter cap
                    ForwardState edge(tr, cfg_k);
                    edge.seed(prefix);
                    edge.run();
                    unpruned = edge.to_model();
                } else {
                    unpruned = refit_terms(prefix, tr, cfg_k);
                }
                const MarsModel pruned = backward_prune(unpruned, tr);
                const Eigen::VectorXd pred = predict(pruned, te);
                result.table[e].fold_rmse[static_cast<std::size_t>(f)] =
                    std::sqrt((te.y - pred).squaredNorm() / static_cast<double>(te.n()));
            }
        };

        std::vector<std::future<void>> futures;
        for (int f = 0; f < folds; ++f)
            futures.push_back(std::async(std::launch::async, run_fold, f));
        for (auto& fut : futures) fut.get();
    }

    for (auto& entry : result.table) {
        double sum = 0;
        for (double v : entry.fold_rmse) sum += v;
        entry.mean_rmse = sum / static_cast<double>(entry.fold_rmse.size());
    }

    const CvEntry* best = &result.table.front();
    for (const auto& entry : result.table) {
        const bool wins =
            entry.mean_rmse < best->mean_rmse ||
            (entry.mean_rmse == best->mean_rmse &&
             (entry.config.max_terms < best->config.max_terms ||
              (entry.config.max_terms == best->config.max_terms &&
               entry.config.max_degree < best->config.max_degree)));
        if (wins) best = &entry;
    }
    result.best = best->config;
    return result;
}

std::vector<MarsConfig> default_cv_grid(const MarsConfig& base) {
    std::vector<MarsConfig> grid;
    for (int degree : {1, 2}) {
        for (int k = 2; k <= 100; k += 10) {
            MarsConfig cfg = base;
            cfg.max_degree = degree;
            cfg.max_terms = k;
            grid.push_back(cfg);
        }
    }
    return grid;
}

std::string format_term(const BasisTerm& term) {
    std::string out;
    for (std::size_t i = 0; i < term.factors.size(); ++i) {
        const auto& f = term.factors[i];
        if (i) out += "*";
        switch (f.kind) {
            case FactorKind::HingePlus:
                out += fmt::format("h({}-{})", f.variable, format_number(f.knot));
                break;
            case FactorKind::HingeMinus:
                out += fmt::format("h({}-{})", format_number(f.knot), f.variable);
                break;
            case FactorKind::Indicator: out += f.variable; break;
        }
    }
    return out;
}

std::string format_model(const MarsModel& model) {
    std::string out;
    out += fmt::format("terms: {}  knots: {}  max_degree: {}\n", model.terms.size(),
                       model.knot_count(), model.config.max_degree);
    out += fmt::format("rsq: {:.4f}  grsq: {:.4f}  gcv: {:.6g}\n", model.rsq, model.grsq,
                       model.gcv);
    out += fmt::format(
        "config: max_terms={} min_rsq_gain={} penalty={} cv_folds={} seed={}\n",
        model.config.max_terms, model.config.min_rsq_gain, model.config.knot_penalty(),
        model.config.cv_folds, model.config.rng_seed);
    out += fmt::format("{:<48} {:>12}\n", "term", "weight");
    out += fmt::format("{:<48} {:>12.3e}\n", "(Intercept)", model.intercept);
    for (const auto& t : model.terms)
        out += fmt::format("{:<48} {:>12.3e}\n", format_term(t), t.coefficient);
    return out;
}

}  // namespace skillmeta
