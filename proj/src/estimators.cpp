#include "ssr/estimators.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ssr {

EmpiricalModel::EmpiricalModel(Dims dims)
    : dims_(dims), n_(dims.cells(), 0), reward_sum_(dims.cells(), 0.0), trans_(dims.cells()) {
    if (dims.horizon < 1 || dims.states < 1 || dims.actions < 1) {
        throw std::invalid_argument("EmpiricalModel dimensions must be positive");
    }
}

void EmpiricalModel::update(const EpisodeRecord& episode) {
    if (episode.steps.size() != static_cast<std::size_t>(dims_.horizon)) {
        throw std::invalid_argument("episode length does not match horizon");
    }
    for (int h = 0; h < dims_.horizon; ++h) {
        const auto& st = episode.steps[h];
        if (!dims_.contains(h, st.state, st.action)) {
            throw std::invalid_argument("episode step outside model dimensions");
        }
    }
    if (episode.final_state < 0 || episode.final_state >= dims_.states) {
        throw std::invalid_argument("episode final state outside model dimensions");
    }
    for (int h = 0; h < dims_.horizon; ++h) {
        const auto& st = episode.steps[h];
        const auto idx = dims_.index(h, st.state, st.action);
        ++n_[idx];
        reward_sum_[idx] += st.reward;
        // The successor of the last step is recorded too so that every row
        // keeps sum(trans_count) == n; the planner never reads past V[H].
        const int next = h + 1 < dims_.horizon ? episode.steps[h + 1].state : episode.final_state;
        auto& row = trans_[idx];
        auto it = std::lower_bound(row.begin(), row.end(), next,
                                   [](const SuccessorCount& c, int v) { return c.next < v; });
        if (it != row.end() && it->next == next) {
            ++it->count;
        } else {
            row.insert(it, SuccessorCount{next, 1});
        }
    }
    ++k_;
}

std::int64_t EmpiricalModel::trans_count(int h, int s, int a, int next) const {
    for (const auto& c : successors(h, s, a)) {
        if (c.next == next) return c.count;
    }
    return 0;
}

double EmpiricalModel::r_hat(int h, int s, int a) const {
    const auto idx = dims_.index(h, s, a);
    return reward_sum_[idx] / static_cast<double>(n_[idx] + 1);
}

std::vector<double> EmpiricalModel::p_hat(int h, int s, int a) const {
    std::vector<double> row(static_cast<std::size_t>(dims_.states), 0.0);
    const double denom = static_cast<double>(visits(h, s, a) + 1);
    for (const auto& c : successors(h, s, a)) row[c.next] = static_cast<double>(c.count) / denom;
    return row;
}

std::vector<double> EmpiricalModel::p_tilde(int h, int s, int a) const {
    std::vector<double> row(static_cast<std::size_t>(dims_.states), 0.0);
    const double denom = static_cast<double>(std::max<std::int64_t>(visits(h, s, a), 1));
    for (const auto& c : successors(h, s, a)) row[c.next] = static_cast<double>(c.count) / denom;
    return row;
}

std::string EmpiricalModel::counts_json() const {
    nlohmann::ordered_json counts = nlohmann::ordered_json::object();
    for (int h = 0; h < dims_.horizon; ++h) {
        for (int s = 0; s < dims_.states; ++s) {
            for (int a = 0; a < dims_.actions; ++a) {
                const auto n = visits(h, s, a);
                if (n == 0) continue;
                counts[std::to_string(h) + "," + std::to_string(s) + "," + std::to_string(a)] = n;
            }
        }
    }
    nlohmann::ordered_json out;
    out["k"] = k_;
    out["n"] = std::move(counts);
    return out.dump();
}

void EmpiricalModel::set_cell(int h, int s, int a, std::int64_t visits, double reward_sum,
                              std::vector<SuccessorCount> successors) {
    if (!dims_.contains(h, s, a) || visits < 0) throw std::invalid_argument("set_cell: bad cell");
    std::sort(successors.begin(), successors.end(),
              [](const SuccessorCount& x, const SuccessorCount& y) { return x.next < y.next; });
    std::int64_t total = 0;
    for (const auto& c : successors) {
        if (c.next < 0 || c.next >= dims_.states || c.count < 0) {
            throw std::invalid_argument("set_cell: bad successor");
        }
        total += c.count;
    }
    if (total != visits) throw std::invalid_argument("set_cell: successor counts must sum to visits");
    const auto idx = dims_.index(h, s, a);
    n_[idx] = visits;
    reward_sum_[idx] = reward_sum;
    trans_[idx] = std::move(successors);
}

}  // namespace ssr
