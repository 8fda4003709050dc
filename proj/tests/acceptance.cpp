// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. A criterion number may be passed as the sole argument to
// run it alone.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "geonet/gadgets.hpp"
#include "geonet/path_pivot.hpp"
#include "geonet/runners.hpp"
#include "geonet/serialize.hpp"

using namespace geonet;

namespace {

struct CriterionResult {
    bool pass = false;
    std::string detail;
};

std::uint64_t kernel_lines_for(double eps) {
    return static_cast<std::uint64_t>(std::ceil(std::numbers::pi / std::sqrt(2.0 * eps)));
}

std::uint64_t instance_seed(std::uint64_t n, int eps_idx, int i) {
    return 1000003ull * n + 4099ull * static_cast<std::uint64_t>(eps_idx) +
           static_cast<std::uint64_t>(i) + 1;
}

// Shared runs for criteria 1-4: per (n, eps, instance) one diameter-mode run
// (which contains the kernel phase) and one hull-mode run on the same
// network.
struct KernelBundle {
    bool computed = false;
    // verification
    std::size_t verify_fail = 0;
    double worst_margin = 1.0;  // min of (worst width ratio) - (1 - eps)
    std::string verify_breakdown;
    // budgets
    std::size_t budget_fail = 0;
    std::size_t depth_fail = 0;
    // diameter
    std::size_t diam_fail = 0;
    double worst_diam_ratio = 1.0;
    // hull
    std::size_t hull_fail = 0;
    double worst_hull_excess = 0.0;  // max distance / (eps * diam)
    // audits
    std::size_t runs = 0;
    std::size_t budget_violations = 0;
};

KernelBundle& kernel_bundle() {
    static KernelBundle bundle;
    if (bundle.computed) return bundle;
    bundle.computed = true;

    const int instances = 50;
    const std::vector<std::size_t> sizes{50, 200};
    const std::vector<double> epsilons{0.5, 0.1, 0.02};

    std::string breakdown;
    for (const auto n : sizes) {
        for (int ei = 0; ei < static_cast<int>(epsilons.size()); ++ei) {
            const double eps = epsilons[ei];
            const std::uint64_t lines = kernel_lines_for(eps);
            int slice_fail = 0;
            for (int i = 0; i < instances; ++i) {
                const auto seed = instance_seed(n, ei, i);
                const auto net =
                    make_random_connected(n, 0.1, 2.0, Knowledge::KT1, seed);
                RunConfig cfg{SchedulerPolicy::restricted(), seed, {}};

                const auto diam_run = run_eps_diameter(net, eps, cfg);
                const auto hull_run = run_eps_hull(net, eps, cfg);
                bundle.runs += 2;
                bundle.budget_violations +=
                    audit_trace_budget(diam_run.trace, net.budget_bits());
                bundle.budget_violations +=
                    audit_trace_budget(hull_run.trace, net.budget_bits());

                // C1: the kernel width property.
                KernelSet ks;
                for (const auto& [mx, mn] : diam_run.kernel_lines)
                    ks.extremes.push_back({mx.pos, mn.pos});
                const auto report = verify_eps_kernel(ks, net.positions(), eps, 4);
                if (!report.ok) {
                    ++bundle.verify_fail;
                    ++slice_fail;
                }
                bundle.worst_margin =
                    std::min(bundle.worst_margin, report.worst_ratio - (1.0 - eps));

                // C2: message and causal-depth budgets of the kernel phase.
                const auto& kernel_phase = diam_run.ledger.phase("kernel");
                const auto& st_phase = diam_run.ledger.phase("spanning_tree");
                if (kernel_phase.messages > (2 * lines + 2) * n) ++bundle.budget_fail;
                const std::uint64_t kernel_depth =
                    kernel_phase.max_causal_depth > st_phase.max_causal_depth
                        ? kernel_phase.max_causal_depth - st_phase.max_causal_depth
                        : 0;
                if (kernel_depth > diam_run.tree.tree_diameter * (2 * lines + 2))
                    ++bundle.depth_fail;

                // C3: diameter ratio.
                const auto exact = diameter_oracle(net.positions());
                const double ratio = diam_run.pair_distance / exact.dist;
                bundle.worst_diam_ratio = std::min(bundle.worst_diam_ratio, ratio);
                if (!(ratio >= 1.0 - eps && ratio <= 1.0 + 1e-12)) ++bundle.diam_fail;

                // C4: hull distance guarantee.
                std::vector<GridPoint> hull_pts;
                for (const auto& item : hull_run.hull) hull_pts.push_back(item.pos);
                const HullPolygon hull{hull_pts};
                double worst = 0.0;
                for (const auto& p : net.positions())
                    worst = std::max(worst, distance_to_hull(p, hull));
                const double excess = worst / (eps * exact.dist);
                bundle.worst_hull_excess = std::max(bundle.worst_hull_excess, excess);
                if (worst > eps * exact.dist) ++bundle.hull_fail;
            }
            char buf[96];
            std::snprintf(buf, sizeof(buf), " [n=%zu eps=%.2f: %d/%d]", n, eps,
                          instances - slice_fail, instances);
            breakdown += buf;
        }
    }
    bundle.verify_breakdown = breakdown;
    return bundle;
}

CriterionResult criterion1() {
    auto& b = kernel_bundle();
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "verify failures %zu/300, worst margin ratio-(1-eps) = %+.6f;",
                  b.verify_fail, b.worst_margin);
    return {b.verify_fail == 0, std::string(buf) + b.verify_breakdown};
}

CriterionResult criterion2() {
    auto& b = kernel_bundle();
    char buf[160];
    std::snprintf(buf, sizeof(buf), "message budget failures %zu/300, depth failures %zu/300",
                  b.budget_fail, b.depth_fail);
    return {b.budget_fail == 0 && b.depth_fail == 0, buf};
}

CriterionResult criterion3() {
    auto& b = kernel_bundle();
    char buf[160];
    std::snprintf(buf, sizeof(buf), "ratio failures %zu/300, worst returned/exact %.6f",
                  b.diam_fail, b.worst_diam_ratio);
    return {b.diam_fail == 0, buf};
}

CriterionResult criterion4() {
    auto& b = kernel_bundle();
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "distance failures %zu/300, worst max-distance/(eps*diam) %.6f",
                  b.hull_fail, b.worst_hull_excess);
    return {b.hull_fail == 0, buf};
}

std::size_t g_extra_budget_violations = 0;

CriterionResult criterion5() {
    const int instances = 50;
    std::size_t bound_fail = 0, floor_fail = 0, budget_fail = 0, corollary_fail = 0;
    for (const std::size_t n : {std::size_t{50}, std::size_t{200}}) {
        for (int i = 0; i < instances; ++i) {
            const auto seed = instance_seed(n, 7, i);
            const auto net = make_random_connected(n, 0.1, 2.0, Knowledge::KT1, seed);
            RunConfig cfg{SchedulerPolicy::restricted(), seed, {}};
            const auto result = run_closest_pair(net, 0, cfg);
            g_extra_budget_violations += audit_trace_budget(result.trace, net.budget_bits());

            const auto exact = closest_pair_oracle(net.positions());
            const double bound = std::sqrt(2.0) * static_cast<double>(net.grid_side()) /
                                 std::sqrt(static_cast<double>(result.k_guarantee));
            if (result.pair_distance > bound * (1 + 1e-12)) ++bound_fail;
            if (result.pair_distance < exact.dist - 1e-9) ++floor_fail;
            const std::uint64_t lgc = BitSchema::bits_for(result.cells);
            if (result.ledger.phase("closest_search").messages > n * (lgc + 3) + 3 * n)
                ++budget_fail;
        }
        // Corollary grids at k in {4, 16, 64} (valid when k <= n-1).
        for (const std::uint64_t kk : {4ull, 16ull, 64ull}) {
            if (kk > n - 1) continue;
            for (int i = 0; i < 10; ++i) {
                const auto seed = instance_seed(n, 8 + static_cast<int>(kk), i);
                const auto net = make_random_connected(n, 0.1, 2.0, Knowledge::KT1, seed);
                RunConfig cfg{SchedulerPolicy::restricted(), seed, {}};
                const auto result = run_closest_pair(net, kk, cfg);
                g_extra_budget_violations +=
                    audit_trace_budget(result.trace, net.budget_bits());
                const auto exact = closest_pair_oracle(net.positions());
                const double bound = std::sqrt(2.0) * static_cast<double>(net.grid_side()) /
                                     std::sqrt(static_cast<double>(kk));
                if (result.pair_distance > bound * (1 + 1e-12) ||
                    result.pair_distance < exact.dist - 1e-9)
                    ++corollary_fail;
            }
        }
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "bound failures %zu, below-exact failures %zu, search budget failures %zu, "
                  "corollary failures %zu",
                  bound_fail, floor_fail, budget_fail, corollary_fail);
    return {bound_fail + floor_fail + budget_fail + corollary_fail == 0, buf};
}

CriterionResult criterion6() {
    const auto start = std::chrono::steady_clock::now();
    std::size_t total = 0, held = 0;

    const auto check = [&](const GadgetInstance& inst) {
        ++total;
        if (verify_gadget(inst).claim_holds) ++held;
    };
    const auto sweep_pair = [&](const CharVector& a, const CharVector& b) {
        const double dc = 2.0 + 2.0 / std::log2(3.0 * static_cast<double>(a.size()));
        check(gen_diameter_gadget(a, b, dc));
        check(gen_hull_gadget(a, b, 2.0));
        check(gen_closest_gadget(a, b, ClosestVariant::base, 2.0));
        check(gen_closest_gadget(a, b, ClosestVariant::spread, 2.0));
        check(gen_closest_gadget(a, b, ClosestVariant::grouped, 2.0));
    };

    for (unsigned am = 0; am < 16; ++am) {
        for (unsigned bm = 0; bm < 16; ++bm) {
            CharVector a(4), b(4);
            for (std::size_t i = 0; i < 4; ++i) {
                a[i] = (am >> i) & 1u;
                b[i] = (bm >> i) & 1u;
            }
            sweep_pair(a, b);
        }
    }
    std::mt19937_64 rng(20260810);
    for (const std::size_t N : {8u, 16u, 32u}) {
        for (int iter = 0; iter < 100; ++iter) {
            CharVector a(N), b(N);
            for (auto& x : a) x = rng() & 1u;
            for (auto& x : b) x = rng() & 1u;
            sweep_pair(a, b);
        }
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%zu/%zu claims hold across 5 kinds, %lld ms", held, total,
                  static_cast<long long>(elapsed));
    return {held == total && elapsed < 120000, buf};
}

CriterionResult criterion7() {
    const std::size_t m = 16, N = 64;
    const int seeds = 1000;
    std::vector<double> mean(m, 0.0);
    std::size_t correct = 0;
    PathPivotResult sample;
    for (int s = 1; s <= seeds; ++s) {
        std::mt19937_64 rng(777000 + s);
        CharVector x(N), y(N);
        for (auto& v : x) v = rng() & 1u;
        for (auto& v : y) v = rng() & 1u;
        auto res = run_path_pivot_protocol(m, x, y, static_cast<std::uint64_t>(s));
        if (res.answer == vectors_intersect(x, y)) ++correct;
        for (std::size_t e = 0; e < m; ++e)
            mean[e] += static_cast<double>(res.charged_per_edge[e]);
        sample = std::move(res);
    }
    for (auto& v : mean) v /= seeds;
    const double bound = static_cast<double>(N + 1) / static_cast<double>(m) +
                         static_cast<double>(sample.pivot_ship_bits) +
                         static_cast<double>(sample.framing_bits);
    double worst = 0.0;
    for (const double v : mean) worst = std::max(worst, v);
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "answers %zu/%d correct, worst per-edge mean %.4f vs bound %.4f (+10%% = %.4f)",
                  correct, seeds, worst, bound, bound * 1.1);
    return {correct == static_cast<std::size_t>(seeds) && worst <= bound * 1.1, buf};
}

CriterionResult criterion8() {
    // Byte-identical reruns across algorithms and policies.
    std::size_t mismatches = 0;
    std::mt19937_64 rng(880);
    for (int iter = 0; iter < 8; ++iter) {
        const std::size_t n = 30 + rng() % 30;
        const auto net_seed = rng();
        const auto net = make_random_connected(n, 0.15, 2.0, Knowledge::KT1, net_seed);
        RunConfig cfg;
        cfg.seed = rng();
        cfg.policy = (iter % 2) ? SchedulerPolicy::random_delay(9, cfg.seed)
                                : SchedulerPolicy::restricted();
        const auto run_once = [&]() {
            switch (iter % 4) {
                case 0: return run_eps_kernel(net, 0.1, cfg);
                case 1: return run_eps_diameter(net, 0.1, cfg);
                case 2: return run_eps_hull(net, 0.1, cfg);
                default: return run_closest_pair(net, 0, cfg);
            }
        };
        const auto r1 = run_once();
        const auto r2 = run_once();
        if (serialize_trace(r1.trace) != serialize_trace(r2.trace) ||
            serialize_ledger(r1.ledger) != serialize_ledger(r2.ledger))
            ++mismatches;
        g_extra_budget_violations += audit_trace_budget(r1.trace, net.budget_bits());
    }
    auto& b = kernel_bundle();  // ensures criteria 1-5 trace audits ran
    const std::size_t violations = b.budget_violations + g_extra_budget_violations;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "trace mismatches %zu/8, oversize messages %zu across %zu audited runs",
                  mismatches, violations, b.runs + 8);
    return {mismatches == 0 && violations == 0, buf};
}

CriterionResult criterion9() {
    std::size_t mismatches = 0;
    for (int inst = 0; inst < 20; ++inst) {
        const std::size_t n = 20 + inst;
        const auto net = make_random_connected(n, 0.2, 2.0, Knowledge::KT1, 9900 + inst);

        std::vector<RunConfig> configs;
        configs.push_back({SchedulerPolicy::restricted(), 1, {}});
        for (std::uint64_t s = 1; s <= 10; ++s)
            configs.push_back({SchedulerPolicy::random_delay(13, s), s, {}});

        std::optional<std::vector<PointId>> kernel0, hull0;
        std::optional<std::pair<GridPoint, GridPoint>> diam0, close0;
        for (const auto& cfg : configs) {
            const auto kr = run_eps_kernel(net, 0.1, cfg);
            const auto dr = run_eps_diameter(net, 0.1, cfg);
            const auto hr = run_eps_hull(net, 0.1, cfg);
            const auto cr = run_closest_pair(net, 0, cfg);
            const std::pair<GridPoint, GridPoint> dpair{dr.pair->first.pos,
                                                        dr.pair->second.pos};
            const std::pair<GridPoint, GridPoint> cpair{cr.pair->first.pos,
                                                        cr.pair->second.pos};
            if (!kernel0) {
                kernel0 = kr.kernel;
                hull0 = hr.hull;
                diam0 = dpair;
                close0 = cpair;
                continue;
            }
            if (kr.kernel != *kernel0 || hr.hull != *hull0 || dpair != *diam0 ||
                cpair != *close0)
                ++mismatches;
        }
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "answer mismatches %zu over 20 instances x 11 schedules",
                  mismatches);
    return {mismatches == 0, buf};
}

const char* kCriterionNames[] = {
    "eps-kernel width property on distributed S_L",
    "eps-kernel message and causal-depth budgets",
    "diameter approximation ratio >= 1-eps",
    "hull guarantee: node distance <= eps * exact diameter",
    "closest-pair bounds, floor and search budget",
    "gadget iff-claims (exhaustive N=4 + random N=8,16,32)",
    "pivot-relay per-edge load vs (N+1)/m + lg m + framing",
    "determinism and CONGEST budget audit",
    "schedule confluence across policies",
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8, 9};

    CriterionResult (*criteria[])() = {criterion1, criterion2, criterion3,
                                       criterion4, criterion5, criterion6,
                                       criterion7, criterion8, criterion9};
    int failures = 0;
    for (const int id : selected) {
        if (id < 1 || id > 9) {
            std::printf("[SKIP] C%d: unknown criterion\n", id);
            continue;
        }
        const auto result = criteria[id - 1]();
        std::printf("[%s] C%d %s: %s\n", result.pass ? "PASS" : "FAIL", id,
                    kCriterionNames[id - 1], result.detail.c_str());
        std::fflush(stdout);
        if (!result.pass) ++failures;
    }
    return failures;
}
