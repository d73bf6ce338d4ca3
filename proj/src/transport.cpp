#include "capvor/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>

#include "capvor/errors.hpp"
#include "capvor/sites.hpp"

namespace capvor {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct FlowEdge {
    int to;
    double cap;
    double cost;
    double flow;
    int rev;
};

struct Network {
    std::vector<std::vector<FlowEdge>> adj;

    explicit Network(int nodes) : adj(nodes) {}

    void add(int u, int v, double cap, double cost) {
        adj[u].push_back({v, cap, cost, 0.0, static_cast<int>(adj[v].size())});
        adj[v].push_back({u, 0.0, -cost, 0.0,
                          static_cast<int>(adj[u].size()) - 1});
    }
};

double cost_scale(const TransportInstance& inst) {
    double scale = 1.0;
    for (const auto& row : inst.cost)
        for (double c : row) scale = std::max(scale, std::fabs(c));
    return scale;
}

void validate(const TransportInstance& inst) {
    const std::size_t n_users = inst.mass.size();
    const std::size_t n_sites = inst.capacity.size();
    if (inst.cost.size() != n_users)
        throw Error("cost matrix row count does not match user count");
    for (const auto& row : inst.cost) {
        if (row.size() != n_sites)
            throw Error("cost matrix column count does not match site count");
        for (double c : row)
            if (!(c >= 0)) throw Error("costs must be nonnegative");
    }
    for (double m : inst.mass) {
        if (!(m > 0)) throw NegativeMass("user masses must be positive");
        if (std::floor(m) != m) throw Error("user masses must be integral");
    }
    for (double c : inst.capacity)
        if (!(c >= 0)) throw Error("capacities must be nonnegative");
}

}  // namespace

OracleResult solve_exact(const TransportInstance& inst) {
    validate(inst);
    const int N = static_cast<int>(inst.mass.size());
    const int n = static_cast<int>(inst.capacity.size());

    double total = 0;
    for (double m : inst.mass) total += m;

    // usable capacity is whole units; kUnbounded never binds
    std::vector<double> cap(n);
    double cap_sum = 0;
    bool unbounded = false;
    for (int m = 0; m < n; ++m) {
        if (inst.capacity[m] == kUnbounded) {
            cap[m] = total;
            unbounded = true;
        } else {
            cap[m] = std::floor(inst.capacity[m]);
        }
        cap_sum += cap[m];
    }
    if (!unbounded && cap_sum < total)
        throw InfeasibleInstance("total capacity below total demand",
                                 total - cap_sum);

    // nodes: 0 source, 1..N users, N+1..N+n sites, N+n+1 sink
    const int source = 0, sink = N + n + 1;
    Network net(N + n + 2);
    for (int k = 0; k < N; ++k) net.add(source, 1 + k, inst.mass[k], 0.0);
    for (int k = 0; k < N; ++k)
        for (int m = 0; m < n; ++m)
            net.add(1 + k, 1 + N + m, inst.mass[k], inst.cost[k][m]);
    for (int m = 0; m < n; ++m) net.add(1 + N + m, sink, cap[m], 0.0);

    const double slack = 1e-9 * cost_scale(inst);
    std::vector<double> pot(net.adj.size(), 0.0);
    std::vector<double> dist(net.adj.size());
    std::vector<std::pair<int, int>> parent(net.adj.size());  // node, edge

    double pushed = 0;
    while (pushed < total) {
        std::fill(dist.begin(), dist.end(), kInf);
        dist[source] = 0;
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        pq.emplace(0.0, source);
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (du > dist[u]) continue;
            for (std::size_t e = 0; e < net.adj[u].size(); ++e) {
                const FlowEdge& ed = net.adj[u][e];
                if (ed.cap - ed.flow <= 0) continue;
                double rc = ed.cost + pot[u] - pot[ed.to];
                if (rc < 0) {
                    if (rc < -slack)
                        throw Error("negative reduced cost in flow network");
                    rc = 0;
                }
                if (dist[u] + rc < dist[ed.to]) {
                    dist[ed.to] = dist[u] + rc;
                    parent[ed.to] = {u, static_cast<int>(e)};
                    pq.emplace(dist[ed.to], ed.to);
                }
            }
        }
        if (dist[sink] == kInf)
            throw InfeasibleInstance("flow network admits no augmenting path",
                                     total - pushed);
        for (std::size_t v = 0; v < net.adj.size(); ++v)
            if (dist[v] < kInf) pot[v] += dist[v];

        double bottleneck = total - pushed;
        for (int v = sink; v != source;) {
            auto [u, e] = parent[v];
            bottleneck = std::min(bottleneck,
                                  net.adj[u][e].cap - net.adj[u][e].flow);
            v = u;
        }
        for (int v = sink; v != source;) {
            auto [u, e] = parent[v];
            FlowEdge& ed = net.adj[u][e];
            ed.flow += bottleneck;
            net.adj[ed.to][ed.rev].flow -= bottleneck;
            v = u;
        }
        pushed += bottleneck;
    }

    OracleResult out;
    out.assignment.assign(N, -1);
    out.load.assign(n, 0.0);
    out.total_distance = 0;
    for (int k = 0; k < N; ++k) {
        double best_share = -1;
        for (const FlowEdge& ed : net.adj[1 + k]) {
            if (ed.to < 1 + N || ed.to >= 1 + N + n) continue;
            int m = ed.to - 1 - N;
            out.load[m] += ed.flow;
            out.total_distance += ed.flow * inst.cost[k][m];
            if (ed.flow > best_share) {
                best_share = ed.flow;
                out.assignment[k] = m;
            }
        }
    }

    // duals: reduced-cost optimality pins loaded unsaturated sites at the
    // sink potential; saturated sites sit below it, empty ones clamp to 0
    out.site_potential.assign(n, 0.0);
    for (int m = 0; m < n; ++m)
        out.site_potential[m] = std::max(0.0, pot[sink] - pot[1 + N + m]);
    double lo = n ? *std::min_element(out.site_potential.begin(),
                                      out.site_potential.end())
                  : 0.0;
    for (double& d : out.site_potential) d -= lo;

    out.user_potential.assign(N, 0.0);
    for (int k = 0; k < N; ++k) {
        double best = kInf;
        for (int m = 0; m < n; ++m)
            best = std::min(best, inst.cost[k][m] + out.site_potential[m]);
        out.user_potential[k] = best;
    }
    return out;
}

std::optional<ExchangeViolation> check_exchange_optimality(
    const std::vector<int>& assignment, const TransportInstance& inst) {
    const int N = static_cast<int>(inst.mass.size());
    const int n = static_cast<int>(inst.capacity.size());
    if (assignment.size() != inst.mass.size())
        throw MismatchedAssignment("assignment length does not match users");
    for (int a : assignment)
        if (a < 0 || a >= n)
            throw MismatchedAssignment("assignment references unknown site");

    const double slack = 1e-9 * cost_scale(inst);
    std::optional<ExchangeViolation> worst;
    for (int m = 0; m < n; ++m) {
        for (int l = 0; l < n; ++l) {
            if (m == l) continue;
            // switching advantage s(U) = cost(U,l) - cost(U,m); users held
            // by m must not be better movers than users held by l
            int argmin_a = -1, argmax_b = -1;
            double min_a = kInf, max_b = -kInf;
            for (int k = 0; k < N; ++k) {
                double s = inst.cost[k][l] - inst.cost[k][m];
                if (assignment[k] == m && s < min_a) {
                    min_a = s;
                    argmin_a = k;
                }
                if (assignment[k] == l && s > max_b) {
                    max_b = s;
                    argmax_b = k;
                }
            }
            if (argmin_a < 0 || argmax_b < 0) continue;
            double unit_gain = max_b - min_a;
            if (unit_gain <= slack) continue;
            double gain = unit_gain * std::min(inst.mass[argmin_a],
                                               inst.mass[argmax_b]);
            if (!worst || gain > worst->gain)
                worst = ExchangeViolation{m, l, argmin_a, argmax_b, gain};
        }
    }
    return worst;
}

double potential_gap(const std::vector<int>& assignment,
                     const std::vector<double>& site_potential,
                     const TransportInstance& inst) {
    const int N = static_cast<int>(inst.mass.size());
    const int n = static_cast<int>(inst.capacity.size());
    if (assignment.size() != inst.mass.size())
        throw MismatchedAssignment("assignment length does not match users");
    if (site_potential.size() != inst.capacity.size())
        throw MismatchedAssignment("potential length does not match sites");
    double gap = 0;
    for (int k = 0; k < N; ++k) {
        int a = assignment[k];
        if (a < 0 || a >= n)
            throw MismatchedAssignment("assignment references unknown site");
        double best = kInf;
        for (int m = 0; m < n; ++m)
            best = std::min(best, inst.cost[k][m] + site_potential[m]);
        gap = std::max(gap, inst.cost[k][a] + site_potential[a] - best);
    }
    return gap;
}

double brute_force_optimum(const TransportInstance& inst) {
    validate(inst);
    const int N = static_cast<int>(inst.mass.size());
    const int n = static_cast<int>(inst.capacity.size());
    if (N > 12 || n > 4) throw Error("brute force limited to 12 users, 4 sites");
    for (double m : inst.mass)
        if (m != 1.0) throw Error("brute force requires unit masses");

    std::vector<int> cap(n);
    for (int m = 0; m < n; ++m) {
        double c = inst.capacity[m] == kUnbounded ? N : inst.capacity[m];
        cap[m] = static_cast<int>(std::min<double>(N, std::floor(c)));
    }

    // state: remaining capacities packed base (N+1)
    auto pack = [&](const std::vector<int>& c) {
        int key = 0;
        for (int m = n - 1; m >= 0; --m) key = key * (N + 1) + c[m];
        return key;
    };
    std::unordered_map<int, double> best;
    best[pack(cap)] = 0.0;
    std::vector<int> state(n);
    for (int k = 0; k < N; ++k) {
        std::unordered_map<int, double> next;
        for (const auto& [key, cost] : best) {
            int rest = key;
            for (int m = 0; m < n; ++m) {
                state[m] = rest % (N + 1);
                rest /= (N + 1);
            }
            for (int m = 0; m < n; ++m) {
                if (state[m] == 0) continue;
                --state[m];
                int nk = pack(state);
                double total = cost + inst.cost[k][m];
                auto it = next.find(nk);
                if (it == next.end() || total < it->second) next[nk] = total;
                ++state[m];
            }
        }
        best.swap(next);
        if (best.empty())
            throw InfeasibleInstance("no feasible whole-user assignment",
                                     static_cast<double>(N - k));
    }
    double opt = kInf;
    for (const auto& [key, cost] : best) opt = std::min(opt, cost);
    return opt;
}

}  // namespace capvor
