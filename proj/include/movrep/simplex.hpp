#pragma once

#include <vector>

#include "movrep/rational.hpp"

namespace movrep {

enum class RowSense { LE, GE, EQ };

struct LpRow {
    std::vector<std::pair<int, Rat>> coeffs;  // (variable, coefficient)
    RowSense sense = RowSense::LE;
    Rat rhs;
};

// min c'x subject to rows, x >= 0. Everything exact rational.
struct LinearProgram {
    int num_vars = 0;
    std::vector<Rat> objective;
    std::vector<LpRow> rows;

    int add_var(const Rat& cost) {
        objective.push_back(cost);
        return num_vars++;
    }
    void add_row(LpRow row) { rows.push_back(std::move(row)); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Optimal;
    Rat objective;
    std::vector<Rat> x;
    // Dual per original row: <= rows get y <= 0, >= rows y >= 0 (min LP).
    std::vector<Rat> dual;
};

// Dense two-phase tableau simplex with Bland's rule (smallest-index entering,
// smallest basis index on ratio ties), which makes the pivot sequence and the
// returned basic solution deterministic.
class Simplex {
public:
    explicit Simplex(const LinearProgram& lp) : lp_(lp) {}

    LpSolution solve() {
        build();
        LpSolution sol;
        if (!phase1()) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        if (!phase2()) {
            sol.status = LpStatus::Unbounded;
            return sol;
        }
        sol.status = LpStatus::Optimal;
        sol.x.assign(static_cast<size_t>(lp_.num_vars), Rat(0));
        for (size_t i = 0; i < basis_.size(); ++i)
            if (basis_[i] < lp_.num_vars) sol.x[static_cast<size_t>(basis_[i])] = tab_[i][rhs_col_];
        sol.objective = 0;
        for (int j = 0; j < lp_.num_vars; ++j)
            sol.objective += lp_.objective[static_cast<size_t>(j)] * sol.x[static_cast<size_t>(j)];
        sol.dual = duals();
        return sol;
    }

private:
    void build() {
        const size_t m = lp_.rows.size();
        flipped_.assign(m, false);
        std::vector<RowSense> sense(m);
        std::vector<Rat> rhs(m);
        std::vector<std::vector<Rat>> dense(m, std::vector<Rat>(static_cast<size_t>(lp_.num_vars), Rat(0)));
        for (size_t i = 0; i < m; ++i) {
            const LpRow& r = lp_.rows[i];
            sense[i] = r.sense;
            rhs[i] = r.rhs;
            for (const auto& [v, c] : r.coeffs) dense[i][static_cast<size_t>(v)] += c;
            if (rhs[i] < 0) {
                flipped_[i] = true;
                rhs[i] = -rhs[i];
                for (auto& c : dense[i]) c = -c;
                if (sense[i] == RowSense::LE)
                    sense[i] = RowSense::GE;
                else if (sense[i] == RowSense::GE)
                    sense[i] = RowSense::LE;
            }
        }
        // Columns: structural | slack/surplus | artificial | rhs
        slack_col_.assign(m, -1);
        art_col_.assign(m, -1);
        int cols = lp_.num_vars;
        for (size_t i = 0; i < m; ++i)
            if (sense[i] != RowSense::EQ) slack_col_[i] = cols++;
        for (size_t i = 0; i < m; ++i)
            if (sense[i] != RowSense::LE) art_col_[i] = cols++;
        rhs_col_ = cols;
        num_cols_ = cols + 1;
        tab_.assign(m, std::vector<Rat>(static_cast<size_t>(num_cols_), Rat(0)));
        basis_.assign(m, -1);
        for (size_t i = 0; i < m; ++i) {
            for (int j = 0; j < lp_.num_vars; ++j) tab_[i][static_cast<size_t>(j)] = dense[i][static_cast<size_t>(j)];
            if (slack_col_[i] >= 0)
                tab_[i][static_cast<size_t>(slack_col_[i])] = (sense[i] == RowSense::LE) ? 1 : -1;
            if (art_col_[i] >= 0) tab_[i][static_cast<size_t>(art_col_[i])] = 1;
            tab_[i][static_cast<size_t>(rhs_col_)] = rhs[i];
            basis_[i] = (sense[i] == RowSense::LE) ? slack_col_[i] : art_col_[i];
        }
        sense_ = std::move(sense);
    }

    // Reduced-cost row for cost vector c over all tableau columns.
    std::vector<Rat> reduced_costs(const std::vector<Rat>& cost) const {
        std::vector<Rat> red = cost;
        red.resize(static_cast<size_t>(num_cols_), Rat(0));
        for (size_t i = 0; i < tab_.size(); ++i) {
            const Rat cb = cost[static_cast<size_t>(basis_[i])];
            if (cb == 0) continue;
            for (int j = 0; j < num_cols_; ++j) red[static_cast<size_t>(j)] -= cb * tab_[i][static_cast<size_t>(j)];
        }
        return red;
    }

    bool iterate(const std::vector<Rat>& cost, bool forbid_artificial) {
        while (true) {
            std::vector<Rat> red = reduced_costs(cost);
            int enter = -1;
            for (int j = 0; j < rhs_col_; ++j) {
                if (forbid_artificial && is_artificial(j)) continue;
                if (red[static_cast<size_t>(j)] < 0) {
                    enter = j;
                    break;  // Bland: smallest index
                }
            }
            if (enter < 0) return true;  // optimal for this cost
            int leave = -1;
            Rat best_ratio;
            for (size_t i = 0; i < tab_.size(); ++i) {
                const Rat& a = tab_[i][static_cast<size_t>(enter)];
                if (a <= 0) continue;
                Rat ratio = tab_[i][static_cast<size_t>(rhs_col_)] / a;
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[static_cast<size_t>(leave)])) {
                    leave = static_cast<int>(i);
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return false;  // unbounded direction
            pivot(static_cast<size_t>(leave), enter);
        }
    }

    bool phase1() {
        bool need = false;
        for (size_t i = 0; i < tab_.size(); ++i)
            if (art_col_[i] >= 0) need = true;
        if (!need) return true;
        std::vector<Rat> cost(static_cast<size_t>(num_cols_), Rat(0));
        for (size_t i = 0; i < tab_.size(); ++i)
            if (art_col_[i] >= 0) cost[static_cast<size_t>(art_col_[i])] = 1;
        const bool ok = iterate(cost, false);
        MOVREP_CHECK(ok, "phase 1 cannot be unbounded");
        Rat value(0);
        for (size_t i = 0; i < tab_.size(); ++i)
            if (is_artificial(basis_[i])) value += tab_[i][rhs_col_];
        if (value != 0) return false;
        // Drive zero-value artificials out of the basis where possible.
        for (size_t i = 0; i < tab_.size(); ++i) {
            if (!is_artificial(basis_[i])) continue;
            for (int j = 0; j < rhs_col_; ++j) {
                if (is_artificial(j)) continue;
                if (tab_[i][static_cast<size_t>(j)] != 0) {
                    pivot(i, j);
                    break;
                }
            }
        }
        return true;
    }

    bool phase2() {
        std::vector<Rat> cost(static_cast<size_t>(num_cols_), Rat(0));
        for (int j = 0; j < lp_.num_vars; ++j) cost[static_cast<size_t>(j)] = lp_.objective[static_cast<size_t>(j)];
        return iterate(cost, true);
    }

    void pivot(size_t row, int col) {
        const Rat p = tab_[row][static_cast<size_t>(col)];
        for (int j = 0; j < num_cols_; ++j) tab_[row][static_cast<size_t>(j)] /= p;
        for (size_t i = 0; i < tab_.size(); ++i) {
            if (i == row) continue;
            const Rat f = tab_[i][static_cast<size_t>(col)];
            if (f == 0) continue;
            for (int j = 0; j < num_cols_; ++j)
                tab_[i][static_cast<size_t>(j)] -= f * tab_[row][static_cast<size_t>(j)];
        }
        basis_[row] = col;
    }

    bool is_artificial(int col) const {
        for (size_t i = 0; i < art_col_.size(); ++i)
            if (art_col_[i] == col) return true;
        return false;
    }

    // y solving B'y = c_B against the *initial* column data, reported in the
    // caller's row orientation.
    std::vector<Rat> duals() const {
        const size_t m = tab_.size();
        // Initial column of var j in row i.
        auto init_col = [&](size_t i, int j) -> Rat {
            if (j < lp_.num_vars) {
                Rat v(0);
                for (const auto& [var, c] : lp_.rows[i].coeffs)
                    if (var == j) v += c;
                return flipped_[i] ? Rat(-v) : v;
            }
            if (slack_col_[i] == j) return (sense_[i] == RowSense::LE) ? Rat(1) : Rat(-1);
            if (art_col_[i] == j) return Rat(1);
            return Rat(0);
        };
        // System row r: sum_c init_col(c, basis_[r]) * y_c = cost(basis_[r]).
        std::vector<std::vector<Rat>> a(m, std::vector<Rat>(m + 1, Rat(0)));
        for (size_t r = 0; r < m; ++r) {
            for (size_t c = 0; c < m; ++c) a[r][c] = init_col(c, basis_[r]);
            const int b = basis_[r];
            a[r][m] = (b < lp_.num_vars) ? lp_.objective[static_cast<size_t>(b)] : Rat(0);
        }
        // Gauss-Jordan with first-nonzero pivoting.
        size_t rank_row = 0;
        std::vector<Rat> y(m, Rat(0));
        for (size_t col = 0; col < m && rank_row < m; ++col) {
            size_t sel = rank_row;
            while (sel < m && a[sel][col] == 0) ++sel;
            if (sel == m) continue;
            std::swap(a[sel], a[rank_row]);
            const Rat p = a[rank_row][col];
            for (size_t j = col; j <= m; ++j) a[rank_row][j] /= p;
            for (size_t i = 0; i < m; ++i) {
                if (i == rank_row) continue;
                const Rat f = a[i][col];
                if (f == 0) continue;
                for (size_t j = col; j <= m; ++j) a[i][j] -= f * a[rank_row][j];
            }
            ++rank_row;
        }
        // Back out y by locating each column's pivot row.
        for (size_t i = 0; i < m; ++i) {
            size_t lead = m;
            for (size_t j = 0; j < m; ++j)
                if (a[i][j] != 0) {
                    lead = j;
                    break;
                }
            if (lead < m) y[lead] = a[i][m];
        }
        for (size_t i = 0; i < m; ++i)
            if (flipped_[i]) y[i] = -y[i];
        return y;
    }

    const LinearProgram& lp_;
    std::vector<std::vector<Rat>> tab_;
    std::vector<int> basis_;
    std::vector<int> slack_col_, art_col_;
    std::vector<RowSense> sense_;
    std::vector<bool> flipped_;
    int rhs_col_ = 0, num_cols_ = 0;
};

inline LpSolution solve_lp(const LinearProgram& lp) { return Simplex(lp).solve(); }

}  // namespace movrep
