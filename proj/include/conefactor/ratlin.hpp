#pragma once
// Exact rationals, dense rational matrices, linear solves and a rational
// simplex engine (Bland's rule). Everything else in the library sits on this.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace conefactor {

using Rational = mpq_class;
using RatVec = std::vector<Rational>;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Domain error with a short machine-readable code, e.g. "non_pointed".
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message) : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

inline std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Accepts "p/q", "p", and finite decimals such as "-0.25".
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto bad = [&]() { return std::invalid_argument("not a rational: '" + s + "'"); };
    if (s.empty()) throw bad();
    auto is_int = [](const std::string& t) {
        std::size_t i = (t.size() > 0 && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    auto strip_plus = [](std::string t) {
        if (!t.empty() && t[0] == '+') t.erase(0, 1);
        return t;
    };
    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string n = s.substr(0, slash), d = s.substr(slash + 1);
        if (!is_int(n) || !is_int(d)) throw bad();
        mpz_class den(strip_plus(d), 10);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
        Rational q(mpz_class(strip_plus(n), 10), den);
        q.canonicalize();
        return q;
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        bool neg = !ip.empty() && ip[0] == '-';
        if (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) ip.erase(0, 1);
        if (ip.empty()) ip = "0";
        if (!is_int(ip) || (!fp.empty() && !is_int(fp)) || (!fp.empty() && (fp[0] == '-' || fp[0] == '+')))
            throw bad();
        mpz_class den = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
        mpz_class num(ip + fp, 10);
        Rational q(neg ? mpz_class(-num) : num, den);
        q.canonicalize();
        return q;
    }
    if (!is_int(s)) throw bad();
    return Rational(mpz_class(strip_plus(s), 10));
}

inline Rational rat(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline std::string to_string(const RatVec& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += to_string(v[i]);
    }
    return out + ")";
}

inline Rational dot(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size())
        throw DimensionError("dot: length " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
    return s;
}

inline RatVec add(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw DimensionError("add: length mismatch");
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline RatVec sub(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw DimensionError("sub: length mismatch");
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline RatVec scale(const Rational& c, const RatVec& a) {
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline bool is_zero(const RatVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; });
}

inline RatVec unit_vector(std::size_t n, std::size_t i) {
    RatVec v(n);
    v.at(i) = 1;
    return v;
}

inline RatVec kron(const RatVec& a, const RatVec& b) {
    RatVec r(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i * b.size() + j] = a[i] * b[j];
    return r;
}

class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    RatMatrix(std::size_t rows, std::size_t cols, RatVec entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_)
            throw DimensionError("RatMatrix: " + std::to_string(data_.size()) + " entries for " +
                                 std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    static RatMatrix from_rows(const std::vector<RatVec>& rows, std::size_t cols_if_empty = 0) {
        std::size_t c = rows.empty() ? cols_if_empty : rows[0].size();
        RatMatrix m(rows.size(), c);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != c) throw DimensionError("RatMatrix::from_rows: ragged row " + std::to_string(i));
            for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }
    static RatMatrix identity(std::size_t n) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const RatVec& entries() const { return data_; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    RatVec row(std::size_t i) const { return RatVec(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }
    RatVec col(std::size_t j) const {
        RatVec c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }
    void set_row(std::size_t i, const RatVec& r) {
        if (r.size() != cols_) throw DimensionError("set_row: length mismatch");
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = r[j];
    }

    RatMatrix transpose() const {
        RatMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    RatVec operator*(const RatVec& v) const {
        if (v.size() != cols_)
            throw DimensionError("matrix-vector: " + std::to_string(cols_) + " cols vs vector " + std::to_string(v.size()));
        RatVec r(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            Rational s = 0;
            for (std::size_t j = 0; j < cols_; ++j)
                if (sgn(v[j]) != 0 && sgn((*this)(i, j)) != 0) s += (*this)(i, j) * v[j];
            r[i] = s;
        }
        return r;
    }

    RatMatrix operator*(const RatMatrix& o) const {
        if (o.rows_ != cols_)
            throw DimensionError("matrix product: " + std::to_string(rows_) + "x" + std::to_string(cols_) + " times " +
                                 std::to_string(o.rows_) + "x" + std::to_string(o.cols_));
        RatMatrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Rational& a = (*this)(i, k);
                if (sgn(a) == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    if (sgn(o(k, j)) != 0) r(i, j) += a * o(k, j);
            }
        return r;
    }

    RatMatrix operator+(const RatMatrix& o) const {
        if (o.rows_ != rows_ || o.cols_ != cols_) throw DimensionError("matrix sum: shape mismatch");
        RatMatrix r(*this);
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
        return r;
    }
    RatMatrix operator-(const RatMatrix& o) const {
        if (o.rows_ != rows_ || o.cols_ != cols_) throw DimensionError("matrix difference: shape mismatch");
        RatMatrix r(*this);
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
        return r;
    }

    bool operator==(const RatMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }
    bool operator!=(const RatMatrix& o) const { return !(*this == o); }

private:
    std::size_t rows_ = 0, cols_ = 0;
    RatVec data_;
};

// v^T A
inline RatVec left_multiply(const RatVec& v, const RatMatrix& a) {
    if (v.size() != a.rows()) throw DimensionError("left_multiply: length mismatch");
    RatVec r(a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (sgn(v[i]) == 0) continue;
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (sgn(a(i, j)) != 0) r[j] += v[i] * a(i, j);
    }
    return r;
}

struct RowEchelon {
    RatMatrix reduced;                 // reduced row echelon form
    std::vector<std::size_t> pivots;   // pivot column of each nonzero row
};

inline RowEchelon rref(RatMatrix m) {
    RowEchelon out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        Rational inv = 1 / m(r, c);
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || sgn(m(i, c)) == 0) continue;
            Rational f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (sgn(m(r, j)) != 0) m(i, j) -= f * m(r, j);
        }
        out.pivots.push_back(c);
        ++r;
    }
    out.reduced = std::move(m);
    return out;
}

inline std::size_t rank(const RatMatrix& m) { return rref(m).pivots.size(); }

inline std::size_t rank(const std::vector<RatVec>& rows, std::size_t dim) {
    if (rows.empty()) return 0;
    return rank(RatMatrix::from_rows(rows, dim));
}

// Basis of {x : A x = 0}.
inline std::vector<RatVec> nullspace(const RatMatrix& a) {
    RowEchelon e = rref(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto c : e.pivots) is_pivot[c] = true;
    std::vector<RatVec> basis;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_pivot[f]) continue;
        RatVec v(a.cols());
        v[f] = 1;
        for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.reduced(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solves A x = b. Free variables are set to zero; pivots are chosen by
// scanning columns left to right, so the answer is reproducible.
inline std::optional<RatVec> linsolve(const RatMatrix& a, const RatVec& b) {
    if (a.rows() != b.size())
        throw DimensionError("linsolve: matrix has " + std::to_string(a.rows()) + " rows but rhs has " +
                             std::to_string(b.size()) + " entries");
    RatMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    RowEchelon e = rref(aug);
    if (!e.pivots.empty() && e.pivots.back() == a.cols()) return std::nullopt;
    RatVec x(a.cols());
    for (std::size_t i = 0; i < e.pivots.size(); ++i) x[e.pivots[i]] = e.reduced(i, a.cols());
    return x;
}

inline std::optional<RatMatrix> inverse(const RatMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("inverse: matrix not square");
    std::size_t n = a.rows();
    RatMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = 1;
    }
    RowEchelon e = rref(aug);
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
    RatMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
    return inv;
}

// ---------------------------------------------------------------------------
// Linear programming

// maximize objective·x  s.t.  eq_matrix x = eq_rhs,  ineq_matrix x >= ineq_rhs,
// x_j >= lower[j] where lower[j] is set.  An empty `lower` means every
// variable is free.
struct LinearProgram {
    RatVec objective;
    RatMatrix eq_matrix;
    RatVec eq_rhs;
    RatMatrix ineq_matrix;
    RatVec ineq_rhs;
    std::vector<std::optional<Rational>> lower;

    std::size_t num_vars() const { return objective.size(); }
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LPStatus s) {
    switch (s) {
        case LPStatus::Optimal: return "optimal";
        case LPStatus::Infeasible: return "infeasible";
        case LPStatus::Unbounded: return "unbounded";
    }
    return "?";
}

// For Optimal: `dual` = (y_eq, y_in) with objective = A_eq^T y_eq + A_in^T y_in + z,
//   y_in <= 0, z_j <= 0 on bounded variables, z_j = 0 on free ones, and
//   y_eq·b_eq + y_in·b_in + z·lower = optimum.
// For Infeasible: `dual` = (y_eq, y_in) is a Farkas certificate: with
//   c = A_eq^T y_eq + A_in^T y_in we have y_in >= 0, c_j = 0 on free
//   variables, c_j <= 0 on bounded ones and y·b - c·lower > 0.
struct LPResult {
    LPStatus status = LPStatus::Infeasible;
    Rational optimum;
    RatVec primal;
    RatVec dual;
    std::size_t pivots = 0;
};

namespace detail {

inline void check_lp_dimensions(const LinearProgram& p) {
    std::size_t n = p.num_vars();
    if (p.eq_matrix.rows() != p.eq_rhs.size())
        throw DimensionError("lp: equality block has " + std::to_string(p.eq_matrix.rows()) + " rows but rhs has " +
                             std::to_string(p.eq_rhs.size()) + " entries");
    if (p.eq_matrix.rows() > 0 && p.eq_matrix.cols() != n)
        throw DimensionError("lp: equality block has " + std::to_string(p.eq_matrix.cols()) + " columns, objective has " +
                             std::to_string(n) + " variables");
    if (p.ineq_matrix.rows() != p.ineq_rhs.size())
        throw DimensionError("lp: inequality block has " + std::to_string(p.ineq_matrix.rows()) +
                             " rows but rhs has " + std::to_string(p.ineq_rhs.size()) + " entries");
    if (p.ineq_matrix.rows() > 0 && p.ineq_matrix.cols() != n)
        throw DimensionError("lp: inequality block has " + std::to_string(p.ineq_matrix.cols()) +
                             " columns, objective has " + std::to_string(n) + " variables");
    if (!p.lower.empty() && p.lower.size() != n)
        throw DimensionError("lp: lower-bound block has " + std::to_string(p.lower.size()) + " entries, objective has " +
                             std::to_string(n) + " variables");
}

// Dense tableau; only nonzeros of the pivot row are swept.
class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : t_(rows + 1, RatVec(cols + 1)), cols_(cols) {}
    Rational& at(std::size_t i, std::size_t j) { return t_[i][j]; }
    Rational& rhs(std::size_t i) { return t_[i][cols_]; }
    Rational& cost(std::size_t j) { return t_.back()[j]; }
    Rational& cost_rhs() { return t_.back()[cols_]; }
    std::size_t rows() const { return t_.size() - 1; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t r, std::size_t c) {
        RatVec& pr = t_[r];
        Rational inv = 1 / pr[c];
        nz_.clear();
        for (std::size_t j = 0; j <= cols_; ++j)
            if (sgn(pr[j]) != 0) {
                pr[j] *= inv;
                nz_.push_back(j);
            }
        for (std::size_t i = 0; i < t_.size(); ++i) {
            if (i == r) continue;
            RatVec& row = t_[i];
            if (sgn(row[c]) == 0) continue;
            Rational f = row[c];
            for (std::size_t j : nz_) row[j] -= f * pr[j];
        }
    }

private:
    std::vector<RatVec> t_;
    std::size_t cols_;
    std::vector<std::size_t> nz_;
};

}  // namespace detail

inline LPResult lp_solve(const LinearProgram& p) {
    detail::check_lp_dimensions(p);
    const std::size_t n = p.num_vars();
    const std::size_t m1 = p.eq_matrix.rows(), m2 = p.ineq_matrix.rows(), m = m1 + m2;

    // Structural columns: shifted bounded vars (one column), free vars (two).
    struct Col { std::size_t var; int sign; };
    std::vector<Col> cols;
    std::vector<std::size_t> first_col(n);
    for (std::size_t j = 0; j < n; ++j) {
        first_col[j] = cols.size();
        bool bounded = !p.lower.empty() && p.lower[j].has_value();
        cols.push_back({j, 1});
        if (!bounded) cols.push_back({j, -1});
    }
    const std::size_t nstruct = cols.size();
    const std::size_t nslack = m2;
    const std::size_t nreal = nstruct + nslack;

    auto coef = [&](std::size_t i, std::size_t j) -> const Rational& {
        return i < m1 ? p.eq_matrix(i, j) : p.ineq_matrix(i - m1, j);
    };
    RatVec lo(n);
    for (std::size_t j = 0; j < n; ++j)
        if (!p.lower.empty() && p.lower[j]) lo[j] = *p.lower[j];

    // >= rows with b <= 0 start with their slack basic; the others get an
    // artificial. aux[i] is the column holding row i's initial unit vector.
    RatVec rhs(m);
    std::vector<int> row_sign(m, 1);
    std::vector<bool> slack_basic(m, false);
    std::vector<std::size_t> aux(m);
    std::size_t nart = 0;
    for (std::size_t i = 0; i < m; ++i) {
        Rational b = i < m1 ? p.eq_rhs[i] : p.ineq_rhs[i - m1];
        for (std::size_t j = 0; j < n; ++j)
            if (sgn(lo[j]) != 0) b -= coef(i, j) * lo[j];
        row_sign[i] = (sgn(b) < 0 || (i >= m1 && sgn(b) == 0)) ? -1 : 1;
        slack_basic[i] = i >= m1 && row_sign[i] < 0;
        aux[i] = slack_basic[i] ? nstruct + (i - m1) : nreal + nart++;
        rhs[i] = row_sign[i] * b;
    }
    const std::size_t ncols = nreal + nart;

    detail::Tableau T(m, ncols);
    for (std::size_t i = 0; i < m; ++i) {
        const int s = row_sign[i];
        for (std::size_t c = 0; c < nstruct; ++c) {
            const Rational& a = coef(i, cols[c].var);
            if (sgn(a) != 0) T.at(i, c) = (s * cols[c].sign) * a;
        }
        if (i >= m1) T.at(i, nstruct + (i - m1)) = -s;
        T.at(i, aux[i]) = 1;
        T.rhs(i) = rhs[i];
    }
    std::vector<std::size_t> basis(aux);

    LPResult res;
    auto run = [&](std::size_t enterable) -> bool {  // false => unbounded
        // Dantzig pricing; Bland's rule after a run of degenerate pivots.
        std::size_t degenerate = 0;
        for (;;) {
            std::size_t enter = enterable;
            const bool bland = degenerate >= 20;
            for (std::size_t j = 0; j < enterable; ++j) {
                if (sgn(T.cost(j)) >= 0) continue;
                if (bland) {
                    enter = j;
                    break;
                }
                if (enter == enterable || T.cost(j) < T.cost(enter)) enter = j;
            }
            if (enter == enterable) return true;
            std::size_t leave = m;
            Rational best;
            for (std::size_t i = 0; i < m; ++i) {
                if (sgn(T.at(i, enter)) <= 0) continue;
                Rational ratio = T.rhs(i) / T.at(i, enter);
                if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == m) return false;
            degenerate = sgn(best) == 0 ? degenerate + 1 : 0;
            T.pivot(leave, enter);
            basis[leave] = enter;
            ++res.pivots;
        }
    };

    // Phase 1: minimize the sum of artificials.
    for (std::size_t j = 0; j < ncols; ++j) T.cost(j) = 0;
    T.cost_rhs() = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (slack_basic[i]) continue;
        for (std::size_t j = 0; j < nreal; ++j)
            if (sgn(T.at(i, j)) != 0) T.cost(j) -= T.at(i, j);
        T.cost_rhs() -= T.rhs(i);
    }
    run(nreal);
    Rational infeas = -T.cost_rhs();
    if (sgn(infeas) > 0) {
        res.status = LPStatus::Infeasible;
        res.dual.assign(m, 0);
        for (std::size_t i = 0; i < m; ++i) res.dual[i] = row_sign[i] * (slack_basic[i] ? Rational(-T.cost(aux[i])) : Rational(1 - T.cost(aux[i])));
        return res;
    }

    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < nreal) continue;
        for (std::size_t j = 0; j < nreal; ++j)
            if (sgn(T.at(i, j)) != 0) {
                T.pivot(i, j);
                basis[i] = j;
                ++res.pivots;
                break;
            }
    }

    // Phase 2: minimize -objective.
    RatVec c(ncols);
    for (std::size_t col = 0; col < nstruct; ++col) c[col] = -(cols[col].sign * p.objective[cols[col].var]);
    for (std::size_t j = 0; j < ncols; ++j) T.cost(j) = c[j];
    T.cost_rhs() = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const Rational& cb = c[basis[i]];
        if (sgn(cb) == 0) continue;
        for (std::size_t j = 0; j < ncols; ++j)
            if (sgn(T.at(i, j)) != 0) T.cost(j) -= cb * T.at(i, j);
        T.cost_rhs() -= cb * T.rhs(i);
    }
    if (!run(nreal)) {
        res.status = LPStatus::Unbounded;
        return res;
    }

    RatVec xs(ncols);
    for (std::size_t i = 0; i < m; ++i) xs[basis[i]] = T.rhs(i);
    res.primal = lo;
    for (std::size_t col = 0; col < nstruct; ++col)
        if (sgn(xs[col]) != 0) res.primal[cols[col].var] += cols[col].sign * xs[col];
    res.optimum = dot(p.objective, res.primal);
    res.dual.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) res.dual[i] = row_sign[i] * T.cost(aux[i]);
    res.status = LPStatus::Optimal;
    return res;
}

// Exact checks of the certificates documented on LPResult.
inline bool lp_primal_feasible(const LinearProgram& p, const RatVec& x) {
    if (x.size() != p.num_vars()) return false;
    if (p.eq_matrix.rows() && p.eq_matrix * x != p.eq_rhs) return false;
    if (p.ineq_matrix.rows()) {
        RatVec ax = p.ineq_matrix * x;
        for (std::size_t i = 0; i < ax.size(); ++i)
            if (ax[i] < p.ineq_rhs[i]) return false;
    }
    for (std::size_t j = 0; j < p.lower.size(); ++j)
        if (p.lower[j] && x[j] < *p.lower[j]) return false;
    return true;
}

namespace detail {
inline RatVec lp_dual_combination(const LinearProgram& p, const RatVec& y) {
    std::size_t m1 = p.eq_matrix.rows();
    RatVec c(p.num_vars());
    if (m1) c = left_multiply(RatVec(y.begin(), y.begin() + m1), p.eq_matrix);
    if (p.ineq_matrix.rows()) c = add(c, left_multiply(RatVec(y.begin() + m1, y.end()), p.ineq_matrix));
    return c;
}
inline bool lp_bounded(const LinearProgram& p, std::size_t j) { return !p.lower.empty() && p.lower[j].has_value(); }
}  // namespace detail

inline bool lp_check_farkas(const LinearProgram& p, const RatVec& y) {
    std::size_t m1 = p.eq_matrix.rows(), m2 = p.ineq_matrix.rows();
    if (y.size() != m1 + m2) return false;
    for (std::size_t i = m1; i < m1 + m2; ++i)
        if (sgn(y[i]) < 0) return false;
    RatVec c = detail::lp_dual_combination(p, y);
    Rational val = 0;
    for (std::size_t i = 0; i < m1; ++i) val += y[i] * p.eq_rhs[i];
    for (std::size_t i = 0; i < m2; ++i) val += y[m1 + i] * p.ineq_rhs[i];
    for (std::size_t j = 0; j < p.num_vars(); ++j) {
        if (detail::lp_bounded(p, j)) {
            if (sgn(c[j]) > 0) return false;
            val -= c[j] * *p.lower[j];
        } else if (sgn(c[j]) != 0) {
            return false;
        }
    }
    return sgn(val) > 0;
}

inline bool lp_check_optimal(const LinearProgram& p, const LPResult& r) {
    if (r.status != LPStatus::Optimal || !lp_primal_feasible(p, r.primal)) return false;
    std::size_t m1 = p.eq_matrix.rows(), m2 = p.ineq_matrix.rows();
    if (r.dual.size() != m1 + m2) return false;
    for (std::size_t i = m1; i < m1 + m2; ++i)
        if (sgn(r.dual[i]) > 0) return false;
    RatVec c = detail::lp_dual_combination(p, r.dual);
    Rational dual_obj = 0;
    for (std::size_t i = 0; i < m1; ++i) dual_obj += r.dual[i] * p.eq_rhs[i];
    for (std::size_t i = 0; i < m2; ++i) dual_obj += r.dual[m1 + i] * p.ineq_rhs[i];
    for (std::size_t j = 0; j < p.num_vars(); ++j) {
        Rational z = p.objective[j] - c[j];
        if (detail::lp_bounded(p, j)) {
            if (sgn(z) > 0) return false;
            dual_obj += z * *p.lower[j];
        } else if (sgn(z) != 0) {
            return false;
        }
    }
    return dual_obj == r.optimum && dot(p.objective, r.primal) == r.optimum;
}

// Incremental builder with sparse rows; converts to the dense LinearProgram.
class LpBuilder {
public:
    std::size_t add_var(std::optional<Rational> lower = Rational(0), Rational obj = 0) {
        lower_.push_back(std::move(lower));
        obj_.push_back(std::move(obj));
        return obj_.size() - 1;
    }
    std::size_t add_vars(std::size_t count, std::optional<Rational> lower = Rational(0)) {
        std::size_t first = obj_.size();
        for (std::size_t i = 0; i < count; ++i) add_var(lower);
        return first;
    }
    void set_objective(std::size_t var, Rational c) { obj_.at(var) = std::move(c); }

    using Row = std::map<std::size_t, Rational>;
    void add_eq(Row row, Rational rhs) { add(eq_, eq_rhs_, std::move(row), std::move(rhs)); }
    void add_ge(Row row, Rational rhs) { add(ge_, ge_rhs_, std::move(row), std::move(rhs)); }
    // Drops rows that repeat an existing row exactly.
    void add_eq_unique(Row row, Rational rhs) {
        strip(row);
        if (row.empty()) {
            if (sgn(rhs) != 0) add(eq_, eq_rhs_, std::move(row), std::move(rhs));
            return;
        }
        auto key = std::make_pair(row, rhs);
        if (seen_.insert(key).second) add(eq_, eq_rhs_, std::move(row), std::move(rhs));
    }

    std::size_t num_vars() const { return obj_.size(); }
    std::size_t num_eq() const { return eq_.size(); }

    LinearProgram build() const {
        LinearProgram p;
        std::size_t n = obj_.size();
        p.objective = obj_;
        p.lower = lower_;
        p.eq_matrix = RatMatrix(eq_.size(), n);
        for (std::size_t i = 0; i < eq_.size(); ++i)
            for (auto& [j, v] : eq_[i]) p.eq_matrix(i, j) = v;
        p.eq_rhs = eq_rhs_;
        p.ineq_matrix = RatMatrix(ge_.size(), n);
        for (std::size_t i = 0; i < ge_.size(); ++i)
            for (auto& [j, v] : ge_[i]) p.ineq_matrix(i, j) = v;
        p.ineq_rhs = ge_rhs_;
        return p;
    }

private:
    static void strip(Row& row) {
        for (auto it = row.begin(); it != row.end();)
            it = sgn(it->second) == 0 ? row.erase(it) : std::next(it);
    }
    void add(std::vector<Row>& rows, RatVec& rhs, Row row, Rational b) {
        strip(row);
        for (auto& [j, v] : row)
            if (j >= obj_.size()) throw DimensionError("LpBuilder: row references unknown variable " + std::to_string(j));
        rows.push_back(std::move(row));
        rhs.push_back(std::move(b));
    }
    std::vector<std::optional<Rational>> lower_;
    RatVec obj_;
    std::vector<Row> eq_, ge_;
    RatVec eq_rhs_, ge_rhs_;
    std::set<std::pair<Row, Rational>> seen_;
};

}  // namespace conefactor
