#pragma once
// Piecewise-constant-in-time grid and trajectories. Construction enforces the
// step restriction max_j tau_j < tau_limit (= eps^2 / C_psi for this model),
// which is what makes every implicit step a strongly convex problem.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "anisoac/mesh.hpp"

namespace anisoac {

class TimeGrid {
public:
    TimeGrid() = default;  // empty sentinel for containers; solves require n() >= 1

    TimeGrid(std::vector<double> taus, double tau_limit) : taus_(std::move(taus)) {
        if (taus_.empty()) throw std::invalid_argument("time grid needs at least one step");
        times_.reserve(taus_.size());
        double t = 0.0;
        for (double tau : taus_) {
            if (tau <= 0.0) throw std::invalid_argument("time steps must be positive");
            if (tau >= tau_limit)
                throw std::invalid_argument("time step violates the restriction tau < eps^2/C_psi");
            t += tau;
            times_.push_back(t);
        }
    }

    static TimeGrid uniform(double horizon, int n_steps, double tau_limit) {
        if (n_steps < 1) throw std::invalid_argument("time grid needs at least one step");
        return TimeGrid(std::vector<double>(n_steps, horizon / n_steps), tau_limit);
    }

    int n() const { return static_cast<int>(taus_.size()); }
    double tau(int j) const { return taus_[j]; }           // j = 0..N-1
    double time(int j) const { return times_[j]; }  // end of interval j (0-based)
    double horizon() const { return times_.empty() ? 0.0 : times_.back(); }
    const std::vector<double>& taus() const { return taus_; }

    bool operator==(const TimeGrid& o) const { return taus_ == o.taus_; }

private:
    std::vector<double> taus_;
    std::vector<double> times_;
};

// One nodal field per time interval.
struct Trajectory {
    TimeGrid grid;
    std::vector<NodalField> fields;

    static Trajectory zeros(const TimeGrid& grid, std::size_t n_nodes) {
        Trajectory t{grid, {}};
        t.fields.assign(grid.n(), NodalField(n_nodes, 0.0));
        return t;
    }

    std::size_t n_nodes() const { return fields.empty() ? 0 : fields.front().size(); }
};

inline Trajectory zero_like(const Trajectory& t) {
    return Trajectory::zeros(t.grid, t.n_nodes());
}

inline void axpy(Trajectory& y, double alpha, const Trajectory& x) {
    for (std::size_t j = 0; j < y.fields.size(); ++j) axpy(y.fields[j], alpha, x.fields[j]);
}

inline void scale(Trajectory& y, double alpha) {
    for (auto& f : y.fields) scale(f, alpha);
}

}  // namespace anisoac
