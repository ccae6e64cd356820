#include "perturb/gadget.hpp"

#include "perturb/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace perturb {

namespace {

Bitset rows_common(const Graph& g, const std::vector<int>& vs, const Bitset& inside) {
    Bitset acc = inside;
    for (int v : vs) acc &= g.neighbors(v);
    return acc;
}

long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

}  // namespace

GadgetPlan plan_gadget_bookkeeping(int k, int n, int m) {
    if (k < 2) throw std::invalid_argument("plan: k must be >= 2");
    const long long M = m - 2;
    const long long num = 3LL * k * M - n + 1;
    if (num <= 0) throw std::invalid_argument("plan: class sizes too small");
    GadgetPlan plan;
    plan.m0 = static_cast<int>(ceil_div(num, 3 * k - 1));
    plan.n_e = static_cast<int>(static_cast<long long>(3 * k - 1) * plan.m0 - num);
    plan.z = static_cast<int>(k * (M - plan.m0));
    plan.t = plan.m0 + 2 - plan.z - plan.n_e;
    plan.s_c = plan.m0 - plan.t;
    if (plan.m0 < 2 || plan.m0 > M) throw std::invalid_argument("plan: family size infeasible");
    if (plan.z < 0 || plan.t < 2 || plan.s_c < 1)
        throw std::invalid_argument("plan: bookkeeping infeasible for these sizes");
    // shape check against the continuous formulas (rounding slack only)
    const double delta = static_cast<double>(n + 2 - m) / n;
    const double t_paper = (1.0 - 4.0 * k / (3.0 * k - 1) * delta) * n;
    if (std::abs(plan.t - t_paper) > 6.0 * k + 6.0)
        throw std::logic_error("plan: drifted from the target path length");
    return plan;
}

SuperRegularInstance gen_super_regular_instance(int k, int n, double d, double delta0,
                                                double delta1, Seed seed) {
    if (k < 2) throw std::invalid_argument("gen_super_regular_instance: k must be >= 2");
    if (!(d > 0.0 && d <= 1.0)) throw std::invalid_argument("gen_super_regular_instance: d in (0,1]");
    if (!(delta1 > 0.0) || !(delta0 > 2 * delta1) || delta0 >= 1.0)
        throw std::invalid_argument("gen_super_regular_instance: need 0 < 2*delta1 < delta0 < 1");

    const int mod = 6 * k - 2;
    // aim the class-size gap at the middle of the window so the transversal
    // family keeps slack, subject to n - m divisible by 6k-2
    int gap = static_cast<int>(std::llround((delta0 + delta1) / 2 * n));
    gap = static_cast<int>(ceil_div(std::max(gap, 1), mod)) * mod;
    while (gap > delta0 * n && gap - mod >= 1) gap -= mod;
    if (gap < delta1 * n) gap = static_cast<int>(ceil_div(static_cast<long long>(
                                                              std::ceil(delta1 * n)),
                                                          mod)) *
                                mod;
    const int m = n - gap;
    if (m < (1.0 - delta0) * n || m > (1.0 - delta1) * n)
        throw std::invalid_argument("gen_super_regular_instance: window too narrow for divisibility");
    plan_gadget_bookkeeping(k, n, m);  // fail fast if the pipeline could not balance

    SuperRegularInstance inst;
    inst.k = k;
    inst.n = n;
    inst.m = m;
    inst.d = d;
    inst.delta0 = delta0;
    inst.delta1 = delta1;

    const int nv = n + 4;
    const int total = nv + k * m;
    inst.vset = Bitset(total);
    for (int v = 0; v < nv; ++v) inst.vset.set(v);
    for (int i = 0; i < k; ++i) {
        Bitset u(total);
        for (int j = 0; j < m; ++j) u.set(nv + i * m + j);
        inst.usets.push_back(u);
    }

    const double density = std::min(1.0, 2 * d);
    GraphBuilder gb(total);
    Rng rng(seed.child("bipartite"));
    for (int i = 0; i < k; ++i) {
        const int base = nv + i * m;
        for (int v = 0; v < nv; ++v)
            for (int j = 0; j < m; ++j)
                if (rng.bernoulli(density)) gb.add_edge(v, base + j);
    }

    // enforce the degree halves of super-regularity by row resampling
    const int floor_vu = static_cast<int>(std::ceil(d * m));
    const int floor_uv = static_cast<int>(std::ceil(d * nv));
    Rng fix_rng(seed.child("degree-fix"));
    for (int pass = 0; pass < 20; ++pass) {
        bool clean = true;
        for (int i = 0; i < k; ++i) {
            const int base = nv + i * m;
            for (int v = 0; v < nv; ++v) {
                if (intersection_count(gb.neighbors(v), inst.usets[i]) >= floor_vu) continue;
                clean = false;
                for (int j = 0; j < m; ++j) {
                    gb.remove_edge(v, base + j);
                    if (fix_rng.bernoulli(density)) gb.add_edge(v, base + j);
                }
            }
            for (int j = 0; j < m; ++j) {
                if (intersection_count(gb.neighbors(base + j), inst.vset) >= floor_uv) continue;
                clean = false;
                for (int v = 0; v < nv; ++v) {
                    gb.remove_edge(v, base + j);
                    if (fix_rng.bernoulli(density)) gb.add_edge(v, base + j);
                }
            }
        }
        if (clean) break;
        if (pass == 19)
            throw std::runtime_error("gen_super_regular_instance: resample limit exceeded");
    }
    inst.bip = gb.build();

    // end tuples with the common-neighborhood floor in every class
    const long long tuple_floor = static_cast<long long>(std::ceil(d * d * n / 2));
    Rng trng(seed.child("tuples"));
    auto pick_tuple = [&](std::pair<int, int> avoid1, std::pair<int, int> avoid2)
        -> std::pair<int, int> {
        for (int tries = 0; tries < 20000; ++tries) {
            int a = trng.next_int(nv), b = trng.next_int(nv);
            if (a == b) continue;
            if (a == avoid1.first || a == avoid1.second || a == avoid2.first || a == avoid2.second)
                continue;
            if (b == avoid1.first || b == avoid1.second || b == avoid2.first || b == avoid2.second)
                continue;
            bool ok = true;
            for (int i = 0; i < k && ok; ++i)
                if (intersection_count(inst.bip.neighbors(a) & inst.bip.neighbors(b),
                                       inst.usets[i]) < tuple_floor)
                    ok = false;
            if (ok) return {a, b};
        }
        throw std::runtime_error("gen_super_regular_instance: end-tuple resample limit exceeded");
    };
    inst.x_tuple = pick_tuple({-1, -1}, {-1, -1});
    inst.y_tuple = pick_tuple(inst.x_tuple, {-1, -1});

    std::string why;
    if (!check_instance_invariants(inst, &why))
        throw std::logic_error("gen_super_regular_instance: " + why);
    return inst;
}

bool check_instance_invariants(const SuperRegularInstance& inst, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const int n = inst.n;
    if (inst.vset.count() != n + 4) return fail("|V| != n+4");
    if ((n - inst.m) % (6 * inst.k - 2) != 0) return fail("n-m not divisible by 6k-2");
    if (inst.m < (1.0 - inst.delta0) * n - 1e-9 || inst.m > (1.0 - inst.delta1) * n + 1e-9)
        return fail("m outside the size window");
    const int floor_vu = static_cast<int>(std::ceil(inst.d * inst.m));
    const int floor_uv = static_cast<int>(std::ceil(inst.d * (n + 4)));
    for (int i = 0; i < inst.k; ++i) {
        if (inst.usets[i].count() != inst.m) return fail("|U_i| != m");
        bool ok = true;
        inst.vset.for_each([&](int v) {
            if (intersection_count(inst.bip.neighbors(v), inst.usets[i]) < floor_vu) ok = false;
        });
        if (!ok) return fail("V-side degree floor violated");
        inst.usets[i].for_each([&](int u) {
            if (intersection_count(inst.bip.neighbors(u), inst.vset) < floor_uv) ok = false;
        });
        if (!ok) return fail("U-side degree floor violated");
    }
    const long long tuple_floor = static_cast<long long>(std::ceil(inst.d * inst.d * n / 2));
    for (auto t : {inst.x_tuple, inst.y_tuple})
        for (int i = 0; i < inst.k; ++i)
            if (intersection_count(inst.bip.neighbors(t.first) & inst.bip.neighbors(t.second),
                                   inst.usets[i]) < tuple_floor)
                return fail("end-tuple common-neighborhood floor violated");
    return true;
}

AuxHypergraphF::AuxHypergraphF(const SuperRegularInstance& inst, const Graph* overlay)
    : inst_(&inst), overlay_(overlay),
      threshold_(static_cast<long long>(std::ceil(std::pow(inst.d, inst.k) * inst.n / 2))) {
    if (threshold_ < 1) threshold_ = 1;
}

bool AuxHypergraphF::contains(const std::vector<int>& tuple) const {
    if (static_cast<int>(tuple.size()) != inst_->k)
        throw std::invalid_argument("AuxHypergraphF: tuple arity");
    if (overlay_) {
        for (int i = 0; i < inst_->k; ++i)
            for (int d = 1; d <= 2; ++d)
                if (i + d < inst_->k && !overlay_->has_edge(tuple[i], tuple[i + d])) return false;
    }
    return intersection_count(rows_common(inst_->bip, tuple, inst_->vset), inst_->vset) >=
           threshold_;
}

bool AuxHypergraphF::good_for(const std::vector<int>& tuple, const Bitset& x) const {
    const long long floor_x = std::max<long long>(
        1, static_cast<long long>(std::ceil(std::pow(inst_->d, inst_->k) * x.count() / 2)));
    return intersection_count(rows_common(inst_->bip, tuple, x), x) >= floor_x;
}

FStatsK2 exact_f_stats_k2(const SuperRegularInstance& inst, const Graph& overlay) {
    if (inst.k != 2) throw std::invalid_argument("exact_f_stats_k2: k must be 2");
    FStatsK2 st;
    auto u0 = inst.usets[0].to_vector();
    auto u1 = inst.usets[1].to_vector();
    const long long theta =
        std::max<long long>(1, static_cast<long long>(std::ceil(inst.d * inst.d * inst.n / 2)));
    std::vector<long long> deg0(u0.size(), 0), deg1(u1.size(), 0);
    for (size_t i = 0; i < u0.size(); ++i) {
        const Bitset& row = inst.bip.neighbors(u0[i]);
        for (size_t j = 0; j < u1.size(); ++j) {
            if (intersection_count(row, inst.bip.neighbors(u1[j])) >= theta) {
                ++st.f_edges;
                ++deg0[i];
                ++deg1[j];
            }
        }
    }
    st.min_degree_f = st.f_edges;
    for (long long d : deg0) st.min_degree_f = std::min(st.min_degree_f, d);
    for (long long d : deg1) st.min_degree_f = std::min(st.min_degree_f, d);

    for (int a : u0) {
        Bitset nbrs = overlay.neighbors(a) & inst.usets[1];
        for (int b = nbrs.next(0); b >= 0; b = nbrs.next(b + 1))
            if (intersection_count(inst.bip.neighbors(a), inst.bip.neighbors(b)) >= theta)
                ++st.f_tilde_edges;
    }
    return st;
}

TransversalResult random_greedy_transversal(const SuperRegularInstance& inst, const Graph& overlay,
                                            int target, const Bitset& excluded, Rng& rng) {
    TransversalResult res;
    res.target = target;
    AuxHypergraphF ftilde = sample_F_tilde(inst, overlay);

    std::vector<std::vector<int>> avail(inst.k);
    for (int i = 0; i < inst.k; ++i) {
        inst.usets[i].for_each([&](int u) {
            if (!excluded.test(u)) avail[i].push_back(u);
        });
        if (static_cast<int>(avail[i].size()) < target) {
            res.starved = true;
            return res;
        }
    }

    std::vector<int> tuple(inst.k);
    std::vector<int> slot(inst.k);
    const long long streak_limit = std::max<long long>(60000, 400LL * target);
    long long streak = 0;
    // the endgame can wedge on a handful of unusable vertices; releasing a
    // few chosen copies back into the pool acts as local augmentation
    int release_rounds = 80;
    while (res.family.size() < target) {
        ++res.draws;
        if (++streak > streak_limit) {
            if (res.family.size() > 2 && release_rounds-- > 0) {
                for (int r = 0; r < 3 && !res.family.copies.empty(); ++r) {
                    size_t idx = rng.next_below(res.family.copies.size());
                    for (int i = 0; i < inst.k; ++i)
                        avail[i].push_back(res.family.copies[idx][i]);
                    res.family.copies.erase(res.family.copies.begin() + idx);
                    res.family.common_v.erase(res.family.common_v.begin() + idx);
                }
                streak = 0;
            } else {
                res.starved = true;
                return res;
            }
        }
        bool empty = false;
        for (int i = 0; i < inst.k; ++i) {
            if (avail[i].empty()) {
                empty = true;
                break;
            }
            slot[i] = rng.next_int(static_cast<int>(avail[i].size()));
            tuple[i] = avail[i][slot[i]];
        }
        if (empty || !ftilde.contains(tuple)) continue;
        streak = 0;
        res.family.copies.push_back(tuple);
        res.family.common_v.push_back(rows_common(inst.bip, tuple, inst.vset));
        for (int i = 0; i < inst.k; ++i) {
            std::swap(avail[i][slot[i]], avail[i].back());
            avail[i].pop_back();
        }
    }
    return res;
}

LinkGraphs build_linkgraphs(const TransversalFamily& family, const SuperRegularInstance& inst,
                            double q_link, Rng& rng, GraphBuilder* overlay_accum) {
    LinkGraphs lg;
    const int s = family.size();
    lg.fstar_threshold = std::max<long long>(
        1, static_cast<long long>(std::ceil(std::pow(inst.d, 2 * inst.k + 2) *
                                            std::pow(2.0, -2 * inst.k - 7) * inst.n)));
    GraphBuilder fs(s);
    for (int i = 0; i < s; ++i)
        for (int j = i + 1; j < s; ++j)
            if (intersection_count(family.common_v[i], family.common_v[j]) >= lg.fstar_threshold)
                fs.add_edge(i, j);
    lg.fstar = fs.build();

    DiGraphBuilder fb(s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            if (i == j || !lg.fstar.has_edge(i, j)) continue;
            if (rng.bernoulli(q_link)) {
                fb.add_arc(i, j);
                if (overlay_accum)
                    overlay_accum->add_edge(family.copies[i].back(), family.copies[j].front());
            }
        }
    lg.fbar = fb.build();
    return lg;
}

DfsPathResult dfs_random_greedy_path(const LinkGraphs& lg, int t, int dead_end_cap, Rng& rng) {
    DfsPathResult res;
    const int s = lg.fbar.vertex_count();
    if (t > s) return res;
    Bitset dead(s), in_path(s), revisited(s);
    std::vector<int> path;
    const long long step_cap = 200LL * s + 100LL * t + 1000;

    while (true) {
        if (++res.steps > step_cap) break;
        if (static_cast<int>(path.size()) == t) {
            res.success = true;
            break;
        }
        if (dead.count() >= dead_end_cap) break;
        if (path.empty()) {
            Bitset fresh = (dead | in_path).complement();
            auto opts = fresh.to_vector();
            if (opts.empty()) break;
            int h = opts[rng.next_int(static_cast<int>(opts.size()))];
            path.push_back(h);
            in_path.set(h);
            continue;
        }
        int cur = path.back();
        Bitset options = lg.fbar.out_neighbors(cur);
        options -= in_path;
        options -= dead;
        auto opts = options.to_vector();
        if (!opts.empty()) {
            int nxt = opts[rng.next_int(static_cast<int>(opts.size()))];
            path.push_back(nxt);
            in_path.set(nxt);
        } else {
            dead.set(cur);
            in_path.reset(cur);
            path.pop_back();
            if (!path.empty()) revisited.set(path.back());
        }
        res.reached = std::max(res.reached, static_cast<int>(path.size()));
    }
    res.dead_ends = dead.count();
    if (res.success) {
        res.path = path;
        for (size_t i = 0; i + 1 < path.size(); ++i)
            if (!lg.fbar.has_arc(path[i], path[i + 1]))
                throw std::logic_error("dfs path failed the arc re-check");
    }
    return res;
}

long long absorb_threshold(const SuperRegularInstance& inst, const GadgetConfig& cfg) {
    if (cfg.absorb_common_min > 0) return cfg.absorb_common_min;
    return std::max<long long>(
        16, static_cast<long long>(std::pow(std::min(1.0, 2 * inst.d), 2 * inst.k + 1) * inst.n / 4));
}

ConnectorChains absorb_leftover(const SuperRegularInstance& inst, const TransversalFamily& family,
                                const std::vector<int>& hx, const std::vector<int>& hy,
                                const std::vector<int>& path, const Graph& overlay_v,
                                const GadgetPlan& plan, const GadgetConfig& cfg, Rng& rng) {
    ConnectorChains out;
    auto fail = [&](const std::string& stage, const std::string& detail) {
        out.stage = stage;
        out.detail = detail;
        return out;
    };
    const int total = inst.total_vertices();
    const long long theta_abs = absorb_threshold(inst, cfg);

    Bitset in_path(family.size());
    for (int idx : path) in_path.set(idx);
    std::vector<int> spare;
    for (int i = 0; i < family.size(); ++i)
        if (!in_path.test(i)) spare.push_back(i);
    if (static_cast<int>(spare.size()) != plan.s_c)
        throw std::logic_error("absorb_leftover: spare copy count disagrees with the plan");

    Bitset covered_u(total);
    for (const auto& c : family.copies)
        for (int w : c) covered_u.set(w);
    for (int w : hx) covered_u.set(w);
    for (int w : hy) covered_u.set(w);
    std::vector<int> zs;
    for (int i = 0; i < inst.k; ++i)
        (inst.usets[i] - covered_u).for_each([&](int w) { zs.push_back(w); });
    if (static_cast<int>(zs.size()) != plan.z)
        throw std::logic_error("absorb_leftover: |Z| disagrees with the plan");

    const Bitset hx_common = rows_common(inst.bip, hx, inst.vset);
    const Bitset hy_common = rows_common(inst.bip, hy, inst.vset);
    auto common_of = [&](int idx) -> const Bitset& { return family.common_v[idx]; };

    // x connector: the spare copy best linked to both H_x and D.front
    {
        long long best = -1;
        for (int cand : spare) {
            long long score =
                std::min<long long>(intersection_count(hx_common, common_of(cand)),
                                    intersection_count(common_of(cand), common_of(path.front())));
            if (score > best) {
                best = score;
                out.c1 = cand;
            }
        }
        if (best < theta_abs) return fail("ordering", "x-connector has no well-linked spare copy");
    }

    // y chain: greedy max-common insertion over the remaining spares
    {
        std::vector<int> rest;
        for (int cand : spare)
            if (cand != out.c1) rest.push_back(cand);
        rng.shuffle(rest);
        int cur = path.back();
        while (!rest.empty()) {
            int best_i = -1;
            long long best = -1;
            for (size_t i = 0; i < rest.size(); ++i) {
                long long score = intersection_count(common_of(cur), common_of(rest[i]));
                if (score > best) {
                    best = score;
                    best_i = static_cast<int>(i);
                }
            }
            if (best < theta_abs) return fail("ordering", "spare chain ran out of common neighbors");
            cur = rest[best_i];
            out.y_spare_order.push_back(cur);
            rest.erase(rest.begin() + best_i);
        }
        if (intersection_count(common_of(cur), hy_common) < theta_abs)
            return fail("ordering", "y-anchor link below the absorption floor");
    }

    // gap table in final sequence order
    struct GapSlot {
        Bitset common;
        int z = -1;
    };
    std::vector<GapSlot> gaps;
    auto push_gap = [&](const Bitset& left_common, const Bitset& right_common) {
        gaps.push_back({left_common & right_common, -1});
    };
    push_gap(hx_common, common_of(out.c1));
    push_gap(common_of(out.c1), common_of(path.front()));
    {
        const Bitset* prev = &common_of(path.back());
        for (int idx : out.y_spare_order) {
            push_gap(*prev, common_of(idx));
            prev = &common_of(idx);
        }
        push_gap(*prev, hy_common);
    }
    if (static_cast<int>(gaps.size()) != plan.z + plan.n_e)
        throw std::logic_error("absorb_leftover: gap count disagrees with the plan");

    // leftover vertices onto gaps: Hall matching on the eligibility graph
    {
        std::vector<Bitset> rows;
        for (int z : zs) {
            Bitset row(static_cast<int>(gaps.size()));
            for (size_t gi = 0; gi < gaps.size(); ++gi)
                if (intersection_count(gaps[gi].common, inst.bip.neighbors(z)) >= theta_abs)
                    row.set(static_cast<int>(gi));
            rows.push_back(std::move(row));
        }
        auto match = max_bipartite_matching(rows, static_cast<int>(gaps.size()));
        if (match.size != static_cast<int>(zs.size()))
            return fail("absorb-matching", "only " + std::to_string(match.size) + "/" +
                                               std::to_string(zs.size()) +
                                               " leftover vertices placeable");
        for (size_t zi = 0; zi < zs.size(); ++zi) gaps[match.left_match[zi]].z = zs[zi];
    }

    // realization: P4 (with the absorbed vertex between its middle edge) or a
    // single overlay edge, inside the joint common neighborhood
    out.used_v = Bitset(total);
    out.used_v.set(inst.x_tuple.first);
    out.used_v.set(inst.x_tuple.second);
    out.used_v.set(inst.y_tuple.first);
    out.used_v.set(inst.y_tuple.second);
    for (auto& gap : gaps) {
        Bitset domain = gap.common;
        domain -= out.used_v;
        if (gap.z >= 0) domain &= inst.bip.neighbors(gap.z);
        EmbedPattern pat;
        pat.size = gap.z >= 0 ? 4 : 2;
        for (int i = 0; i + 1 < pat.size; ++i) pat.require_edge(i, i + 1);
        pat.domains.assign(pat.size, domain);
        auto emb = find_embedding(overlay_v, pat, rng, cfg.embed_budget);
        if (emb.status != EmbedStatus::found)
            return fail(gap.z >= 0 ? "absorb-p4" : "absorb-edge",
                        "no connector inside a common neighborhood of size " +
                            std::to_string(domain.count()));
        if (gap.z >= 0)
            out.gap_vertices.push_back(
                {emb.vertices[0], emb.vertices[1], gap.z, emb.vertices[2], emb.vertices[3]});
        else
            out.gap_vertices.push_back({emb.vertices[0], emb.vertices[1]});
        for (int w : emb.vertices) out.used_v.set(w);
    }
    out.success = true;
    return out;
}

FinalMatchingResult final_matching(const SuperRegularInstance& inst,
                                   const TransversalFamily& family, const std::vector<int>& path,
                                   const Bitset& v_remaining) {
    if (v_remaining.count() != static_cast<int>(path.size()) - 1)
        throw std::invalid_argument("final_matching: |V_remaining| must equal |E(D)|");
    auto v_list = v_remaining.to_vector();
    std::vector<int> v_pos(inst.total_vertices(), -1);
    for (size_t i = 0; i < v_list.size(); ++i) v_pos[v_list[i]] = static_cast<int>(i);

    std::vector<Bitset> edge_rows;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        Bitset common = family.common_v[path[i]] & family.common_v[path[i + 1]];
        Bitset row(static_cast<int>(v_list.size()));
        common.for_each([&](int v) {
            if (v_pos[v] >= 0) row.set(v_pos[v]);
        });
        edge_rows.push_back(std::move(row));
    }
    auto match = max_bipartite_matching(edge_rows, static_cast<int>(v_list.size()));
    FinalMatchingResult res;
    if (match.size != static_cast<int>(edge_rows.size())) {
        res.hall = hall_violation(edge_rows, static_cast<int>(v_list.size()), match);
        return res;
    }
    res.success = true;
    for (size_t i = 0; i < edge_rows.size(); ++i) res.matched_v.push_back(v_list[match.left_match[i]]);
    // each matched vertex must see the four relevant copy endpoints
    for (size_t i = 0; i < res.matched_v.size(); ++i) {
        const auto& lv = family.copies[path[i]];
        const auto& rv = family.copies[path[i + 1]];
        int v = res.matched_v[i];
        if (!inst.bip.has_edge(lv[lv.size() - 2], v) || !inst.bip.has_edge(lv.back(), v) ||
            !inst.bip.has_edge(rv[0], v) || !inst.bip.has_edge(rv[1], v))
            throw std::logic_error("final_matching: matched vertex misses a copy endpoint");
    }
    return res;
}

MultipartiteResult run_multipartite_pipeline(const SuperRegularInstance& inst, double p, Seed seed,
                                             const GadgetConfig& cfg) {
    MultipartiteResult res;
    res.seed = seed.base;
    auto stage_fail = [&](const std::string& stage, const std::string& detail) {
        res.stages.push_back({stage, false, detail});
        return res;
    };
    auto stage_ok = [&](const std::string& stage, const std::string& detail = "") {
        res.stages.push_back({stage, true, detail});
    };

    const int k = inst.k;
    const int n = inst.n;
    const int total = inst.total_vertices();

    GadgetPlan plan;
    try {
        plan = plan_gadget_bookkeeping(k, n, inst.m);
    } catch (const std::exception& e) {
        return stage_fail("plan", e.what());
    }
    res.plan = plan;

    // random rounds: two U-side halves for anchors and family, per-pair link
    // coins at the same half rate, and the V-side overlay at full p
    const double q_half = 1.0 - std::sqrt(std::max(0.0, 1.0 - p));
    GraphBuilder accum(total);
    auto sample_u_overlay = [&](Seed s) {
        GraphBuilder b(total);
        Rng r(s);
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) {
                inst.usets[i].for_each([&](int ui) {
                    inst.usets[j].for_each([&](int uj) {
                        if (r.bernoulli(q_half)) {
                            b.add_edge(ui, uj);
                            accum.add_edge(ui, uj);
                        }
                    });
                });
            }
        return b.build();
    };
    Graph overlay_u0 = sample_u_overlay(seed.child("u-overlay", 0));
    Graph overlay_u1 = sample_u_overlay(seed.child("u-overlay", 1));
    Graph overlay_v;
    {
        auto vlist = inst.vset.to_vector();
        GraphBuilder b(total);
        Rng r(seed.child("v-overlay"));
        for (size_t i = 0; i < vlist.size(); ++i)
            for (size_t j = i + 1; j < vlist.size(); ++j)
                if (r.bernoulli(p)) {
                    b.add_edge(vlist[i], vlist[j]);
                    accum.add_edge(vlist[i], vlist[j]);
                }
        overlay_v = b.build();
    }

    // ----- stage: anchors H_x, H_y inside the end tuples' common neighborhoods -----
    struct AnchorCopy {
        std::vector<int> vertices;
        Bitset common_v;
    };
    AuxHypergraphF ftilde0 = sample_F_tilde(inst, overlay_u0);
    Rng anchor_rng(seed.child("anchors"));
    Bitset anchor_used(total);

    auto find_anchor = [&](std::pair<int, int> tup, const char* name,
                           std::optional<AnchorCopy>& out) -> bool {
        // the whole available common neighborhood serves as the search box
        std::vector<std::vector<int>> boxes(k);
        for (int i = 0; i < k; ++i) {
            Bitset common = inst.bip.neighbors(tup.first) & inst.bip.neighbors(tup.second);
            common &= inst.usets[i];
            common -= anchor_used;
            boxes[i] = common.to_vector();
            if (boxes[i].empty()) return false;
        }
        std::vector<int> tuple(k);
        for (long long tries = 0; tries < cfg.anchor_tries; ++tries) {
            for (int i = 0; i < k; ++i)
                tuple[i] = boxes[i][anchor_rng.next_int(static_cast<int>(boxes[i].size()))];
            if (!ftilde0.contains(tuple)) continue;
            out = AnchorCopy{tuple, rows_common(inst.bip, tuple, inst.vset)};
            for (int v : tuple) anchor_used.set(v);
            return true;
        }
        (void)name;
        return false;
    };

    std::optional<AnchorCopy> hx, hy;
    if (!find_anchor(inst.x_tuple, "x", hx)) return stage_fail("anchor-x", "no F-tilde edge in the x boxes");
    if (!find_anchor(inst.y_tuple, "y", hy)) return stage_fail("anchor-y", "no F-tilde edge in the y boxes");
    stage_ok("anchors");

    // ----- stage: transversal family of size exactly m0 -----
    TransversalResult fam;
    for (int attempt = 0; attempt < cfg.family_retries; ++attempt) {
        Rng fam_rng(seed.child("family", attempt));
        fam = random_greedy_transversal(inst, overlay_u1, plan.m0, anchor_used, fam_rng);
        if (!fam.starved) break;
    }
    if (fam.starved)
        return stage_fail("family", "starved at " + std::to_string(fam.family.size()) + "/" +
                                        std::to_string(plan.m0));
    stage_ok("family", std::to_string(fam.draws) + " draws");
    const TransversalFamily& family = fam.family;

    // ----- stage: directed path D over the family -----
    Rng link_rng(seed.child("links"));
    LinkGraphs lg = build_linkgraphs(family, inst, q_half, link_rng, &accum);
    const int dead_cap = std::max(10, static_cast<int>(cfg.eps_prime * n));
    Rng dfs_rng(seed.child("dfs"));
    DfsPathResult dfs = dfs_random_greedy_path(lg, plan.t, dead_cap, dfs_rng);
    if (!dfs.success)
        return stage_fail("dfs", "reached " + std::to_string(dfs.reached) + "/" +
                                     std::to_string(plan.t) + ", dead ends " +
                                     std::to_string(dfs.dead_ends));
    stage_ok("dfs", std::to_string(dfs.dead_ends) + " dead ends");

    // ----- stage: absorption of the leftover class vertices -----
    Rng absorb_rng(seed.child("absorb"));
    ConnectorChains chains = absorb_leftover(inst, family, hx->vertices, hy->vertices, dfs.path,
                                             overlay_v, plan, cfg, absorb_rng);
    if (!chains.success) return stage_fail(chains.stage, chains.detail);
    stage_ok("absorb");

    // ----- stage: final matching of the remaining V onto E(D) -----
    Bitset v_rem = inst.vset - chains.used_v;
    if (v_rem.count() != plan.t - 1)
        throw std::logic_error("pipeline: remaining V-count disagrees with E(D)");
    auto fm = final_matching(inst, family, dfs.path, v_rem);
    if (!fm.success)
        return stage_fail("final-matching",
                          "deficient Hall set of " +
                              std::to_string(fm.hall ? fm.hall->left_set.size() : 0) +
                              " path edges");
    stage_ok("final-matching");

    // ----- assembly -----
    std::vector<int> seq{inst.x_tuple.second, inst.x_tuple.first};
    size_t gap_at = 0;
    auto emit_gap = [&]() {
        for (int v : chains.gap_vertices[gap_at]) seq.push_back(v);
        ++gap_at;
    };
    for (int v : hx->vertices) seq.push_back(v);
    emit_gap();
    for (int v : family.copies[chains.c1]) seq.push_back(v);
    emit_gap();
    for (size_t i = 0; i < dfs.path.size(); ++i) {
        for (int v : family.copies[dfs.path[i]]) seq.push_back(v);
        if (i + 1 < dfs.path.size()) seq.push_back(fm.matched_v[i]);
    }
    for (int idx : chains.y_spare_order) {
        emit_gap();
        for (int v : family.copies[idx]) seq.push_back(v);
    }
    emit_gap();
    for (int v : hy->vertices) seq.push_back(v);
    seq.push_back(inst.y_tuple.first);
    seq.push_back(inst.y_tuple.second);

    res.union_graph = graph_union(inst.bip, accum.build());
    if (static_cast<int>(seq.size()) != total)
        throw std::logic_error("pipeline: assembled sequence does not cover the instance");
    if (!verify_square_path(res.union_graph, seq, true))
        throw std::logic_error("pipeline: assembled sequence failed verification");
    res.sequence = std::move(seq);
    res.success = true;
    stage_ok("verified");
    return res;
}

std::pair<double, double> bipartite_split_fractions(int n, int m, double delta0, double delta1) {
    const double c = 1.0 - (delta0 + delta1) / 2.0;
    const double r = static_cast<double>(m) / n;
    const double q2 = c * (1 - 2 * c * r) / (r * (1 - 4 * c * c));
    const double q1 = c * r * (1 - 2 * q2);
    return {q1, q2};
}

namespace {

struct SubInstanceMap {
    SuperRegularInstance inst;
    std::vector<int> to_host;  // sub index -> host vertex
};

// repackages host-graph classes (Vc; U1c, U2c) into the instance layout
SubInstanceMap make_sub_instance(const Graph& host, const std::vector<int>& vc,
                                 const std::vector<int>& u1c, const std::vector<int>& u2c,
                                 std::pair<int, int> x_tuple, std::pair<int, int> y_tuple,
                                 double d, double delta0, double delta1) {
    SubInstanceMap sm;
    SuperRegularInstance& inst = sm.inst;
    inst.k = 2;
    inst.n = static_cast<int>(vc.size()) - 4;
    inst.m = static_cast<int>(u1c.size());
    inst.d = d;
    inst.delta0 = delta0;
    inst.delta1 = delta1;

    const int total = inst.n + 4 + 2 * inst.m;
    std::vector<int> to_sub(host.vertex_count(), -1);
    sm.to_host.assign(total, -1);
    auto place = [&](const std::vector<int>& verts, int base) {
        for (size_t i = 0; i < verts.size(); ++i) {
            to_sub[verts[i]] = base + static_cast<int>(i);
            sm.to_host[base + static_cast<int>(i)] = verts[i];
        }
    };
    place(vc, 0);
    place(u1c, inst.n + 4);
    place(u2c, inst.n + 4 + inst.m);

    inst.vset = Bitset(total);
    for (int i = 0; i < inst.n + 4; ++i) inst.vset.set(i);
    inst.usets.assign(2, Bitset(total));
    for (int i = 0; i < inst.m; ++i) {
        inst.usets[0].set(inst.n + 4 + i);
        inst.usets[1].set(inst.n + 4 + inst.m + i);
    }

    GraphBuilder gb(total);
    for (int v : vc)
        host.neighbors(v).for_each([&](int u) {
            if (to_sub[u] >= inst.n + 4 && to_sub[v] >= 0) gb.add_edge(to_sub[v], to_sub[u]);
        });
    inst.bip = gb.build();
    inst.x_tuple = {to_sub[x_tuple.first], to_sub[x_tuple.second]};
    inst.y_tuple = {to_sub[y_tuple.first], to_sub[y_tuple.second]};
    return sm;
}

}  // namespace

BipartiteResult run_bipartite_pipeline(const Graph& g, const Bitset& u, const Bitset& v,
                                       std::pair<int, int> x_tuple, std::pair<int, int> y_tuple,
                                       double p, Seed seed, const GadgetConfig& cfg) {
    BipartiteResult res;
    res.seed = seed.base;
    auto stage_fail = [&](const std::string& stage, const std::string& detail) {
        res.stages.push_back({stage, false, detail});
        return res;
    };

    const int n = v.count();
    const int m = u.count();
    if (m < 3 * n / 4 || m > n)
        return stage_fail("split", "|U| outside [3n/4, n]");
    const double delta0 = 0.2, delta1 = 0.05;
    auto [q1, q2] = bipartite_split_fractions(n, m, delta0, delta1);
    res.q1 = q1;
    res.q2 = q2;
    if (!(q1 > 0 && q1 < 0.5 && q2 > 0 && q2 < 0.5))
        return stage_fail("split", "size equations have no admissible solution");

    const double q_half = 1.0 - std::sqrt(std::max(0.0, 1.0 - p));

    // targets: v1 + 2*u2cnt = n, v2 + 2*u1cnt = m, window + mod-10 feasible
    auto feasible = [&](int ni, int ui) {
        return ui >= std::ceil((1.0 - delta0) * ni) && ui <= std::floor((1.0 - delta1) * ni) &&
               (ni - ui) % 10 == 0;
    };
    int v1_target = -1, u1_target = -1, v2_target = -1, u2_target = -1;
    {
        int u1c = static_cast<int>(q2 * m), u2c = static_cast<int>(q1 * n);
        bool found_pair = false;
        for (int du1 = 0; du1 <= 60 && !found_pair; ++du1)
            for (int s1 : {1, -1}) {
                int cu1 = u1c + s1 * du1;
                int cv2 = m - 2 * cu1;
                if (cu1 < 4 || cv2 < 8) continue;
                if (!feasible(cv2 - 4, cu1)) continue;
                for (int du2 = 0; du2 <= 60 && !found_pair; ++du2)
                    for (int s2 : {1, -1}) {
                        int cu2 = u2c + s2 * du2;
                        int cv1 = n - 2 * cu2;
                        if (cu2 < 4 || cv1 < 8) continue;
                        if (!feasible(cv1 - 4, cu2)) continue;
                        v1_target = cv1;
                        u2_target = cu2;
                        v2_target = cv2;
                        u1_target = cu1;
                        found_pair = true;
                    }
            }
        if (!found_pair) return stage_fail("split", "no feasible integer class sizes");
    }

    // random split, then shuttle to the exact targets
    Rng split_rng(seed.child("split"));
    std::vector<int> v1c, u2c, w2c, v2c, u1c, w1c;
    v.for_each([&](int x) {
        if (x == x_tuple.first || x == x_tuple.second) {
            v1c.push_back(x);
            return;
        }
        double r = split_rng.next_double();
        if (r < q1) u2c.push_back(x);
        else if (r < 2 * q1) w2c.push_back(x);
        else v1c.push_back(x);
    });
    u.for_each([&](int x) {
        if (x == y_tuple.first || x == y_tuple.second) {
            v2c.push_back(x);
            return;
        }
        double r = split_rng.next_double();
        if (r < q2) u1c.push_back(x);
        else if (r < 2 * q2) w1c.push_back(x);
        else v2c.push_back(x);
    });
    auto shuttle = [&](std::vector<int>& from, std::vector<int>& to,
                       std::pair<int, int> keep) -> bool {
        if (from.empty()) return false;
        size_t pick = split_rng.next_below(from.size());
        for (size_t tries = 0; tries < from.size(); ++tries, pick = (pick + 1) % from.size()) {
            if (from[pick] == keep.first || from[pick] == keep.second) continue;
            to.push_back(from[pick]);
            from.erase(from.begin() + pick);
            return true;
        }
        return false;
    };
    auto fit_side = [&](std::vector<int>& vc, std::vector<int>& uc, std::vector<int>& wc,
                        int v_target, int u_target, std::pair<int, int> keep) {
        while (static_cast<int>(uc.size()) > u_target)
            if (!shuttle(uc, vc, {-1, -1})) return false;
        while (static_cast<int>(wc.size()) > u_target)
            if (!shuttle(wc, vc, {-1, -1})) return false;
        while (static_cast<int>(uc.size()) < u_target)
            if (!shuttle(vc, uc, keep)) return false;
        while (static_cast<int>(wc.size()) < u_target)
            if (!shuttle(vc, wc, keep)) return false;
        return static_cast<int>(vc.size()) == v_target;
    };
    if (!fit_side(v1c, u2c, w2c, v1_target, u2_target, x_tuple) ||
        !fit_side(v2c, u1c, w1c, v2_target, u1_target, y_tuple))
        return stage_fail("split", "class shuttling missed its targets");
    res.stages.push_back({"split", true, ""});

    GraphBuilder accum(g.vertex_count());

    // bridge tuples: an edge (z,z') in the V1 round and (w,w') in the V2
    // round forming a K4 with deterministic cross edges, with common-
    // neighborhood floors into the respective classes
    Rng bridge_rng(seed.child("bridge"));
    auto sample_internal_edges = [&](const std::vector<int>& verts, Seed s) {
        std::vector<std::pair<int, int>> edges;
        Rng r(s);
        for (size_t i = 0; i < verts.size(); ++i)
            for (size_t j = i + 1; j < verts.size(); ++j)
                if (r.bernoulli(q_half)) edges.emplace_back(verts[i], verts[j]);
        return edges;
    };
    auto z_edges = sample_internal_edges(v1c, seed.child("bridge-v1"));
    auto w_edges = sample_internal_edges(v2c, seed.child("bridge-v2"));
    for (auto [a, b] : z_edges) accum.add_edge(a, b);
    for (auto [a, b] : w_edges) accum.add_edge(a, b);

    const int n1 = v1_target - 4, n2 = v2_target - 4;
    const double d8 = cfg.bipartite_d / 8;  // (d/8)^2 n / 2 per the split argument
    const long long bridge_floor1 =
        std::max<long long>(1, static_cast<long long>(std::ceil(d8 * d8 * n1 / 2)));
    const long long bridge_floor2 =
        std::max<long long>(1, static_cast<long long>(std::ceil(d8 * d8 * n2 / 2)));
    Bitset u1set(g.vertex_count()), w1set(g.vertex_count()), u2set(g.vertex_count()),
        w2set(g.vertex_count());
    for (int x : u1c) u1set.set(x);
    for (int x : w1c) w1set.set(x);
    for (int x : u2c) u2set.set(x);
    for (int x : w2c) w2set.set(x);

    std::pair<int, int> z_tuple{-1, -1}, w_tuple{-1, -1};
    bridge_rng.shuffle(z_edges);
    bridge_rng.shuffle(w_edges);
    for (auto [z, zp] : z_edges) {
        if (z == x_tuple.first || z == x_tuple.second || zp == x_tuple.first ||
            zp == x_tuple.second)
            continue;
        Bitset commons = g.neighbors(z) & g.neighbors(zp);
        if (intersection_count(commons, u1set) < bridge_floor1 ||
            intersection_count(commons, w1set) < bridge_floor1)
            continue;
        for (auto [w, wp] : w_edges) {
            if (w == y_tuple.first || w == y_tuple.second || wp == y_tuple.first ||
                wp == y_tuple.second)
                continue;
            if (!g.has_edge(z, w) || !g.has_edge(z, wp) || !g.has_edge(zp, w) ||
                !g.has_edge(zp, wp))
                continue;
            Bitset commons2 = g.neighbors(w) & g.neighbors(wp);
            if (intersection_count(commons2, u2set) < bridge_floor2 ||
                intersection_count(commons2, w2set) < bridge_floor2)
                continue;
            z_tuple = {z, zp};
            w_tuple = {w, wp};
            break;
        }
        if (z_tuple.first >= 0) break;
    }
    if (z_tuple.first < 0) return stage_fail("bridge", "no K4 bridge in the sampled rounds");
    res.stages.push_back({"bridge", true, ""});

    // two star instances and their pipelines
    auto sm1 = make_sub_instance(g, v1c, u1c, w1c, x_tuple, z_tuple, cfg.bipartite_d, delta0, delta1);
    auto sm2 = make_sub_instance(g, v2c, u2c, w2c, w_tuple, y_tuple, cfg.bipartite_d, delta0, delta1);

    auto run_sub = [&](SubInstanceMap& sm, int which) {
        return run_multipartite_pipeline(sm.inst, q_half, seed.child("sub", which), cfg);
    };
    auto r1 = run_sub(sm1, 1);
    for (auto& st : r1.stages) res.stages.push_back({"sub1-" + st.stage, st.success, st.detail});
    if (!r1.success) return res;
    auto r2 = run_sub(sm2, 2);
    for (auto& st : r2.stages) res.stages.push_back({"sub2-" + st.stage, st.success, st.detail});
    if (!r2.success) return res;

    // join: ... z z' | w' w ... with the K4 cross edges from g
    std::vector<int> seq;
    for (int x : r1.sequence) seq.push_back(sm1.to_host[x]);
    for (int x : r2.sequence) seq.push_back(sm2.to_host[x]);

    auto fold_union = [&](const Graph& sub_union, const std::vector<int>& to_host) {
        for (int a = 0; a < sub_union.vertex_count(); ++a)
            sub_union.neighbors(a).for_each([&](int b) {
                if (a < b) accum.add_edge(to_host[a], to_host[b]);
            });
    };
    fold_union(r1.union_graph, sm1.to_host);
    fold_union(r2.union_graph, sm2.to_host);
    res.union_graph = graph_union(g, accum.build());

    if (static_cast<int>(seq.size()) != n + m)
        throw std::logic_error("bipartite pipeline: sequence does not cover U and V");
    if (!verify_square_path(res.union_graph, seq, true))
        throw std::logic_error("bipartite pipeline: joined sequence failed verification");
    res.sequence = std::move(seq);
    res.success = true;
    res.stages.push_back({"verified", true, ""});
    return res;
}

namespace {

// locally maximal cut: move a vertex whenever its own side holds more than
// half of its degree; every move increases the cut
std::pair<Bitset, Bitset> local_max_cut(const Graph& g, const Bitset& within, Rng& rng) {
    Bitset a(g.vertex_count()), b(g.vertex_count());
    within.for_each([&](int v) { (rng.bernoulli(0.5) ? a : b).set(v); });
    bool moved = true;
    while (moved) {
        moved = false;
        within.for_each([&](int v) {
            bool in_a = a.test(v);
            int own = intersection_count(g.neighbors(v), in_a ? a : b);
            int other = intersection_count(g.neighbors(v), in_a ? b : a);
            if (own > other) {
                (in_a ? a : b).reset(v);
                (in_a ? b : a).set(v);
                moved = true;
            }
        });
    }
    return {a, b};
}

}  // namespace

SublinearResult sublinear_pieces(const Graph& g_det, const Graph& g_rand, int rand_round,
                                 const Bitset& within, int k, int target, Rng& rng,
                                 long long budget) {
    SublinearResult res;
    if (k < 2) throw std::invalid_argument("sublinear_pieces: k must be >= 2");
    if (target <= 0) {
        res.success = true;
        res.report = {"sublinear", true, "nothing to do"};
        return res;
    }

    const int nw = within.count();
    int min_deg = nw;
    within.for_each([&](int v) { min_deg = std::min(min_deg, g_det.degree_into(v, within)); });

    Bitset avail = within;
    auto piece_done = [&](const std::vector<int>& seq, const std::vector<int>& hub_positions) {
        SquarePathPiece piece;
        piece.vertices = seq;
        for (size_t i = 0; i < seq.size(); ++i)
            for (size_t j = i + 1; j < seq.size() && j <= i + 2; ++j) {
                bool hub_edge = false;
                for (int hp : hub_positions)
                    if (static_cast<size_t>(hp) == i || static_cast<size_t>(hp) == j)
                        hub_edge = true;
                piece.tag_edge(seq[i], seq[j], hub_edge ? det_edge() : rnd_edge(rand_round));
            }
        for (int v : seq) avail.reset(v);
        res.pieces.push_back(std::move(piece));
    };

    // pure-random regime: whole copies of P_{k+1}^2 in the overlay
    auto try_pure_random = [&]() {
        while (static_cast<int>(res.pieces.size()) < target) {
            EmbedPattern pat;
            pat.size = k + 1;
            add_square_path_edges(pat, 0, k + 1);
            pat.domains.assign(k + 1, avail);
            auto emb = find_embedding(g_rand, pat, rng, budget);
            if (emb.status != EmbedStatus::found) return;
            piece_done(emb.vertices, {});
        }
    };

    // hub regime: a locally maximal cut supplies hubs of high deterministic
    // degree; the rest of each copy is a random block inside the hub's side
    auto try_hub = [&]() {
        auto [ca, cb] = local_max_cut(g_det, within, rng);
        if (cb.count() < ca.count()) std::swap(ca, cb);
        while (static_cast<int>(res.pieces.size()) < target) {
            int hub = -1;
            Bitset hub_pool = ca & avail;
            auto hubs = hub_pool.to_vector();
            rng.shuffle(hubs);
            const int need = std::max(4, min_deg / 8);
            Bitset bfree(g_det.vertex_count());
            for (int cand : hubs) {
                Bitset freenbrs = g_det.neighbors(cand) & cb & avail;
                if (freenbrs.count() >= need) {
                    hub = cand;
                    bfree = freenbrs;
                    break;
                }
            }
            if (hub < 0) return;

            if (k == 2) {
                EmbedPattern pat;
                pat.size = 2;
                pat.require_edge(0, 1);
                pat.domains.assign(2, bfree);
                auto emb = find_embedding(g_rand, pat, rng, budget);
                if (emb.status != EmbedStatus::found) return;
                piece_done({emb.vertices[0], hub, emb.vertices[1]}, {1});
            } else if (k == 3) {
                EmbedPattern pat;
                pat.size = 3;
                pat.require_edge(0, 1);
                pat.require_edge(1, 2);
                pat.domains.assign(3, bfree);
                auto emb = find_embedding(g_rand, pat, rng, budget);
                if (emb.status != EmbedStatus::found) return;
                piece_done({emb.vertices[0], hub, emb.vertices[1], emb.vertices[2]}, {1});
            } else {
                // appendix structure: b_i b_{i+1} for i < k, b_i b_{i+2} for 3 <= i <= k-2,
                // hub adjacent to b_1..b_4, sequence (b1, b2, hub, b3, ..., bk)
                EmbedPattern pat;
                pat.size = k;
                for (int i = 0; i + 1 < k; ++i) pat.require_edge(i, i + 1);
                for (int i = 2; i + 2 < k; ++i) pat.require_edge(i, i + 2);
                Bitset broad = (cb & avail) - bfree;
                for (int i = 0; i < k; ++i)
                    pat.domains.push_back(i < 4 ? bfree : broad);
                auto emb = find_embedding(g_rand, pat, rng, budget);
                if (emb.status != EmbedStatus::found) return;
                std::vector<int> seq{emb.vertices[0], emb.vertices[1], hub};
                for (int i = 2; i < k; ++i) seq.push_back(emb.vertices[i]);
                piece_done(seq, {2});
            }
        }
    };

    const double small_m_threshold =
        std::pow(std::log(std::max(3, nw)), 2.0 / (2 * k - 3)) *
        std::pow(static_cast<double>(std::max(3, nw)), (2.0 * k - 4) / (2 * k - 3));
    if (min_deg <= small_m_threshold) {
        try_pure_random();
        if (static_cast<int>(res.pieces.size()) < target) try_hub();
    } else {
        try_hub();
        if (static_cast<int>(res.pieces.size()) < target) try_pure_random();
    }

    res.success = static_cast<int>(res.pieces.size()) >= target;
    res.report = {"sublinear", res.success,
                  std::to_string(res.pieces.size()) + "/" + std::to_string(target) + " copies"};
    // each piece must be a square path in the union
    if (res.success) {
        Graph merged = graph_union(g_det, g_rand);
        for (const auto& piece : res.pieces)
            if (!verify_square_path(merged, piece.vertices, false))
                throw std::logic_error("sublinear_pieces: piece failed verification");
    }
    return res;
}

SublinearResult find_sublinear_square_paths(const Graph& g, int k, int t, double p, Seed seed) {
    int min_deg = g.vertex_count() ? g.vertex_count() : 0;
    for (int v = 0; v < g.vertex_count(); ++v) min_deg = std::min(min_deg, g.degree(v));
    const int target = t * min_deg + t;
    Graph overlay = gnp(g.vertex_count(), p, seed.child("overlay"));
    Rng rng(seed.child("search"));
    return sublinear_pieces(g, overlay, 1, Bitset::full(g.vertex_count()), k, target, rng, 200000);
}

}  // namespace perturb
