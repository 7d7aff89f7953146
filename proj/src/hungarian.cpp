#include "mdlseg/hungarian.hpp"

#include "mdlseg/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace mdlseg {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw ValidationError("ragged matrix literal");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SquareSolution {
    std::vector<std::size_t> row_col;
    std::vector<double> u;  // row potentials
    std::vector<double> v;  // column potentials
};

// Shortest augmenting path Hungarian method, O(N^3). `a` is N x N row-major.
SquareSolution solve_square(const std::vector<double>& a, std::size_t n) {
    std::vector<double> u(n + 1, 0.0);
    std::vector<double> v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0);    // column -> row, 1-based, 0 = free
    std::vector<std::size_t> way(n + 1, 0);
    std::vector<double> minv(n + 1);
    std::vector<char> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) {
                    continue;
                }
                const double cur = a[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    SquareSolution out;
    out.row_col.assign(n, 0);
    for (std::size_t j = 1; j <= n; ++j) {
        out.row_col[p[j] - 1] = j - 1;
    }
    out.u.assign(u.begin() + 1, u.end());
    out.v.assign(v.begin() + 1, v.end());
    return out;
}

// Every optimal assignment is a perfect matching on the edges the dual
// potentials leave tight, so the lexicographically smallest optimum is the
// lexicographically smallest perfect matching of that subgraph. Rows are
// fixed in order; moving row r to an earlier column needs an alternating
// path that frees r's current column.
void lexicographic_refine(const std::vector<double>& a, std::size_t n, SquareSolution& sol, double tol) {
    auto tight = [&](std::size_t r, std::size_t c) { return a[r * n + c] - sol.u[r] - sol.v[c] <= tol; };
    auto& row_col = sol.row_col;
    std::vector<std::size_t> col_row(n);
    for (std::size_t r = 0; r < n; ++r) {
        col_row[row_col[r]] = r;
    }
    std::vector<char> locked(n, 0);
    std::vector<char> seen(n);
    std::vector<std::size_t> parent(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (c == row_col[r]) {
                break;
            }
            if (locked[c] || !tight(r, c)) {
                continue;
            }
            const std::size_t start = col_row[c];
            const std::size_t target = row_col[r];
            std::fill(seen.begin(), seen.end(), 0);
            std::queue<std::size_t> frontier;
            frontier.push(start);
            bool found = false;
            while (!frontier.empty() && !found) {
                const std::size_t x = frontier.front();
                frontier.pop();
                for (std::size_t y = 0; y < n; ++y) {
                    if (locked[y] || seen[y] || y == c || !tight(x, y)) {
                        continue;
                    }
                    seen[y] = 1;
                    parent[y] = x;
                    if (y == target) {
                        found = true;
                        break;
                    }
                    frontier.push(col_row[y]);
                }
            }
            if (!found) {
                continue;
            }
            for (std::size_t y = target;;) {
                const std::size_t x = parent[y];
                const std::size_t previous = row_col[x];
                row_col[x] = y;
                col_row[y] = x;
                if (x == start) {
                    break;
                }
                y = previous;
            }
            row_col[r] = c;
            col_row[c] = r;
            break;
        }
        locked[row_col[r]] = 1;
    }
}

} // namespace

Assignment hungarian(const Matrix& cost, Objective objective) {
    if (cost.empty()) {
        throw ValidationError("assignment problem has an empty cost matrix");
    }
    const std::size_t rows = cost.rows();
    const std::size_t cols = cost.cols();
    const std::size_t n = std::max(rows, cols);
    const double sign = objective == Objective::Maximize ? -1.0 : 1.0;
    std::vector<double> a(n * n, 0.0);
    double scale = 1.0;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double x = cost(r, c);
            if (!std::isfinite(x)) {
                throw ValidationError("assignment cost matrix has a non-finite entry at (" + std::to_string(r) +
                                      ", " + std::to_string(c) + ")");
            }
            a[r * n + c] = sign * x;
            scale = std::max(scale, std::fabs(x));
        }
    }

    SquareSolution sol = solve_square(a, n);
    lexicographic_refine(a, n, sol, 1e-9 * scale);

    Assignment out;
    out.row_to_col.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t c = sol.row_col[r];
        if (c < cols) {
            out.row_to_col[r] = c;
            out.total += cost(r, c);
        }
    }
    return out;
}

} // namespace mdlseg
