#pragma once
// Compressed-sparse-row operator on nodal fields. All operators assembled in
// this project share the node-adjacency pattern of the mesh, so the pattern
// is built once and shared; only the value arrays differ.

#include <algorithm>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

#include "anisoac/mesh.hpp"
#include "anisoac/parallel.hpp"

namespace anisoac {

struct SparsityPattern {
    std::vector<int> row_offsets;
    std::vector<int> col_indices;

    static std::shared_ptr<const SparsityPattern> build(const StructuredTriMesh& mesh) {
        const std::size_t n = mesh.node_count();
        std::vector<std::vector<int>> adj(n);
        for (const Triangle& t : mesh.elements())
            for (int a : t.nodes)
                for (int b : t.nodes) adj[a].push_back(b);
        auto p = std::make_shared<SparsityPattern>();
        p->row_offsets.assign(n + 1, 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::sort(adj[i].begin(), adj[i].end());
            adj[i].erase(std::unique(adj[i].begin(), adj[i].end()), adj[i].end());
            p->row_offsets[i + 1] = p->row_offsets[i] + static_cast<int>(adj[i].size());
        }
        p->col_indices.reserve(p->row_offsets[n]);
        for (std::size_t i = 0; i < n; ++i)
            p->col_indices.insert(p->col_indices.end(), adj[i].begin(), adj[i].end());
        return p;
    }

    int find(int row, int col) const {
        for (int k = row_offsets[row]; k < row_offsets[row + 1]; ++k)
            if (col_indices[k] == col) return k;
        throw std::logic_error("entry outside sparsity pattern");
    }
};

class SparseOperator {
public:
    SparseOperator() = default;
    explicit SparseOperator(std::shared_ptr<const SparsityPattern> pattern)
        : pattern_(std::move(pattern)), values_(pattern_->col_indices.size(), 0.0) {}

    std::size_t rows() const { return pattern_->row_offsets.size() - 1; }
    const SparsityPattern& pattern() const { return *pattern_; }
    std::shared_ptr<const SparsityPattern> pattern_ptr() const { return pattern_; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    void add(int row, int col, double v) { values_[pattern_->find(row, col)] += v; }

    double entry(int row, int col) const { return values_[pattern_->find(row, col)]; }

    void apply(const DVec& x, DVec& y) const {
        const auto& ro = pattern_->row_offsets;
        const auto& ci = pattern_->col_indices;
        parallel_for(rows(), [&](std::size_t i) {
            double s = 0.0;
            for (int k = ro[i]; k < ro[i + 1]; ++k) s += values_[k] * x[ci[k]];
            y[i] = s;
        });
    }

    DVec apply(const DVec& x) const {
        DVec y(rows());
        apply(x, y);
        return y;
    }

    DVec diagonal() const {
        DVec d(rows());
        for (std::size_t i = 0; i < rows(); ++i) d[i] = entry(static_cast<int>(i), static_cast<int>(i));
        return d;
    }

    // this += alpha * other (shared pattern required)
    void add_scaled_values(double alpha, const SparseOperator& other) {
        if (other.pattern_ != pattern_) throw std::logic_error("pattern mismatch");
        for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += alpha * other.values_[k];
    }

    void scale_values(double alpha) {
        for (double& v : values_) v *= alpha;
    }

private:
    std::shared_ptr<const SparsityPattern> pattern_;
    std::vector<double> values_;
};

}  // namespace anisoac
