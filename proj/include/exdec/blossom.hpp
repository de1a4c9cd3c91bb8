#pragma once

// Exact maximum-weight matching on general graphs (Edmonds' blossom
// algorithm with primal-dual updates, O(n^3)). Integer weights keep every
// dual variable integral, so the result is exact.
//
// Duals are stored doubled: slack(k) = u_i + u_j - 2 w_k.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "exdec/errors.hpp"

namespace exdec {

struct WeightedEdge {
    int u;
    int v;
    std::int64_t w;
};

namespace detail {

class BlossomMatcher {
  public:
    BlossomMatcher(int num_vertices, const std::vector<WeightedEdge>& edges, bool max_cardinality)
        : n_(num_vertices), edges_(edges), max_card_(max_cardinality) {}

    /// mate[v] = partner vertex or -1.
    std::vector<int> run() {
        const int n = n_;
        const int ne = static_cast<int>(edges_.size());
        if (n == 0) return {};
        std::int64_t maxw = 0;
        for (const auto& e : edges_) maxw = std::max(maxw, e.w);
        endpoint_.resize(static_cast<std::size_t>(2 * ne));
        for (int k = 0; k < ne; ++k) {
            endpoint_[static_cast<std::size_t>(2 * k)] = edges_[static_cast<std::size_t>(k)].u;
            endpoint_[static_cast<std::size_t>(2 * k + 1)] = edges_[static_cast<std::size_t>(k)].v;
        }
        neighbend_.assign(static_cast<std::size_t>(n), {});
        for (int k = 0; k < ne; ++k) {
            const auto& e = edges_[static_cast<std::size_t>(k)];
            neighbend_[static_cast<std::size_t>(e.u)].push_back(2 * k + 1);
            neighbend_[static_cast<std::size_t>(e.v)].push_back(2 * k);
        }
        mate_.assign(static_cast<std::size_t>(n), -1);
        label_.assign(static_cast<std::size_t>(2 * n), 0);
        labelend_.assign(static_cast<std::size_t>(2 * n), -1);
        inblossom_.resize(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) inblossom_[static_cast<std::size_t>(v)] = v;
        blossomparent_.assign(static_cast<std::size_t>(2 * n), -1);
        blossomchilds_.assign(static_cast<std::size_t>(2 * n), {});
        blossomendps_.assign(static_cast<std::size_t>(2 * n), {});
        blossombase_.assign(static_cast<std::size_t>(2 * n), -1);
        for (int v = 0; v < n; ++v) blossombase_[static_cast<std::size_t>(v)] = v;
        unused_.clear();
        for (int b = 2 * n - 1; b >= n; --b) unused_.push_back(b);
        bestedge_.assign(static_cast<std::size_t>(2 * n), -1);
        blossombestedges_.assign(static_cast<std::size_t>(2 * n), {});
        hasbestedges_.assign(static_cast<std::size_t>(2 * n), 0);
        dualvar_.assign(static_cast<std::size_t>(2 * n), 0);
        for (int v = 0; v < n; ++v) dualvar_[static_cast<std::size_t>(v)] = maxw;
        allowedge_.assign(static_cast<std::size_t>(ne), 0);

        for (int stage = 0; stage < n; ++stage) {
            std::fill(label_.begin(), label_.end(), 0);
            std::fill(bestedge_.begin(), bestedge_.end(), -1);
            for (int b = n; b < 2 * n; ++b) {
                blossombestedges_[static_cast<std::size_t>(b)].clear();
                hasbestedges_[static_cast<std::size_t>(b)] = 0;
            }
            std::fill(allowedge_.begin(), allowedge_.end(), 0);
            queue_.clear();
            for (int v = 0; v < n; ++v)
                if (mate_[static_cast<std::size_t>(v)] == -1 && label_[static_cast<std::size_t>(in(v))] == 0)
                    assign_label(v, 1, -1);
            bool augmented = false;
            while (true) {
                while (!queue_.empty() && !augmented) {
                    int v = queue_.back();
                    queue_.pop_back();
                    for (int p : neighbend_[static_cast<std::size_t>(v)]) {
                        int k = p / 2;
                        int w = endpoint_[static_cast<std::size_t>(p)];
                        if (in(v) == in(w)) continue;
                        std::int64_t kslack = 0;
                        if (!allowedge_[static_cast<std::size_t>(k)]) {
                            kslack = slack(k);
                            if (kslack <= 0) allowedge_[static_cast<std::size_t>(k)] = 1;
                        }
                        if (allowedge_[static_cast<std::size_t>(k)]) {
                            if (label_[static_cast<std::size_t>(in(w))] == 0) {
                                assign_label(w, 2, p ^ 1);
                            } else if (label_[static_cast<std::size_t>(in(w))] == 1) {
                                int base = scan_blossom(v, w);
                                if (base >= 0) {
                                    add_blossom(base, k);
                                } else {
                                    augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if (label_[static_cast<std::size_t>(w)] == 0) {
                                label_[static_cast<std::size_t>(w)] = 2;
                                labelend_[static_cast<std::size_t>(w)] = p ^ 1;
                            }
                        } else if (label_[static_cast<std::size_t>(in(w))] == 1) {
                            int b = in(v);
                            if (bestedge_[static_cast<std::size_t>(b)] == -1 ||
                                kslack < slack(bestedge_[static_cast<std::size_t>(b)]))
                                bestedge_[static_cast<std::size_t>(b)] = k;
                        } else if (label_[static_cast<std::size_t>(w)] == 0) {
                            if (bestedge_[static_cast<std::size_t>(w)] == -1 ||
                                kslack < slack(bestedge_[static_cast<std::size_t>(w)]))
                                bestedge_[static_cast<std::size_t>(w)] = k;
                        }
                    }
                }
                if (augmented) break;

                int deltatype = -1;
                std::int64_t delta = 0;
                int deltaedge = -1, deltablossom = -1;
                if (!max_card_) {
                    deltatype = 1;
                    delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + n);
                }
                for (int v = 0; v < n; ++v) {
                    if (label_[static_cast<std::size_t>(in(v))] == 0 && bestedge_[static_cast<std::size_t>(v)] != -1) {
                        std::int64_t d = slack(bestedge_[static_cast<std::size_t>(v)]);
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 2;
                            deltaedge = bestedge_[static_cast<std::size_t>(v)];
                        }
                    }
                }
                for (int b = 0; b < 2 * n; ++b) {
                    if (blossomparent_[static_cast<std::size_t>(b)] == -1 && label_[static_cast<std::size_t>(b)] == 1 &&
                        bestedge_[static_cast<std::size_t>(b)] != -1) {
                        std::int64_t ks = slack(bestedge_[static_cast<std::size_t>(b)]);
                        std::int64_t d = ks / 2;
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 3;
                            deltaedge = bestedge_[static_cast<std::size_t>(b)];
                        }
                    }
                }
                for (int b = n; b < 2 * n; ++b) {
                    if (blossombase_[static_cast<std::size_t>(b)] >= 0 && blossomparent_[static_cast<std::size_t>(b)] == -1 &&
                        label_[static_cast<std::size_t>(b)] == 2 &&
                        (deltatype == -1 || dualvar_[static_cast<std::size_t>(b)] < delta)) {
                        delta = dualvar_[static_cast<std::size_t>(b)];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if (deltatype == -1) {
                    deltatype = 1;
                    delta = std::max<std::int64_t>(0, *std::min_element(dualvar_.begin(), dualvar_.begin() + n));
                }
                for (int v = 0; v < n; ++v) {
                    int l = label_[static_cast<std::size_t>(in(v))];
                    if (l == 1)
                        dualvar_[static_cast<std::size_t>(v)] -= delta;
                    else if (l == 2)
                        dualvar_[static_cast<std::size_t>(v)] += delta;
                }
                for (int b = n; b < 2 * n; ++b) {
                    if (blossombase_[static_cast<std::size_t>(b)] >= 0 && blossomparent_[static_cast<std::size_t>(b)] == -1) {
                        if (label_[static_cast<std::size_t>(b)] == 1)
                            dualvar_[static_cast<std::size_t>(b)] += delta;
                        else if (label_[static_cast<std::size_t>(b)] == 2)
                            dualvar_[static_cast<std::size_t>(b)] -= delta;
                    }
                }
                if (deltatype == 1) {
                    break;
                } else if (deltatype == 2) {
                    allowedge_[static_cast<std::size_t>(deltaedge)] = 1;
                    int i = edges_[static_cast<std::size_t>(deltaedge)].u;
                    int j = edges_[static_cast<std::size_t>(deltaedge)].v;
                    if (label_[static_cast<std::size_t>(in(i))] == 0) std::swap(i, j);
                    queue_.push_back(i);
                } else if (deltatype == 3) {
                    allowedge_[static_cast<std::size_t>(deltaedge)] = 1;
                    queue_.push_back(edges_[static_cast<std::size_t>(deltaedge)].u);
                } else {
                    expand_blossom(deltablossom, false);
                }
            }
            if (!augmented) break;
            for (int b = n; b < 2 * n; ++b) {
                if (blossomparent_[static_cast<std::size_t>(b)] == -1 && blossombase_[static_cast<std::size_t>(b)] >= 0 &&
                    label_[static_cast<std::size_t>(b)] == 1 && dualvar_[static_cast<std::size_t>(b)] == 0)
                    expand_blossom(b, true);
            }
        }
        std::vector<int> result(static_cast<std::size_t>(n), -1);
        for (int v = 0; v < n; ++v)
            if (mate_[static_cast<std::size_t>(v)] >= 0)
                result[static_cast<std::size_t>(v)] = endpoint_[static_cast<std::size_t>(mate_[static_cast<std::size_t>(v)])];
        return result;
    }

  private:
    int in(int v) const { return inblossom_[static_cast<std::size_t>(v)]; }

    std::int64_t slack(int k) const {
        const auto& e = edges_[static_cast<std::size_t>(k)];
        return dualvar_[static_cast<std::size_t>(e.u)] + dualvar_[static_cast<std::size_t>(e.v)] - 2 * e.w;
    }

    void leaves(int b, std::vector<int>& out) const {
        if (b < n_) {
            out.push_back(b);
            return;
        }
        for (int t : blossomchilds_[static_cast<std::size_t>(b)]) leaves(t, out);
    }

    void assign_label(int w, int t, int p) {
        int b = in(w);
        label_[static_cast<std::size_t>(w)] = label_[static_cast<std::size_t>(b)] = t;
        labelend_[static_cast<std::size_t>(w)] = labelend_[static_cast<std::size_t>(b)] = p;
        bestedge_[static_cast<std::size_t>(w)] = bestedge_[static_cast<std::size_t>(b)] = -1;
        if (t == 1) {
            std::vector<int> lv;
            leaves(b, lv);
            queue_.insert(queue_.end(), lv.begin(), lv.end());
        } else if (t == 2) {
            int base = blossombase_[static_cast<std::size_t>(b)];
            int mb = mate_[static_cast<std::size_t>(base)];
            assign_label(endpoint_[static_cast<std::size_t>(mb)], 1, mb ^ 1);
        }
    }

    int scan_blossom(int v, int w) {
        std::vector<int> path;
        int base = -1;
        while (v != -1 || w != -1) {
            int b = in(v);
            if (label_[static_cast<std::size_t>(b)] & 4) {
                base = blossombase_[static_cast<std::size_t>(b)];
                break;
            }
            path.push_back(b);
            label_[static_cast<std::size_t>(b)] = 5;
            if (labelend_[static_cast<std::size_t>(b)] == -1) {
                v = -1;
            } else {
                v = endpoint_[static_cast<std::size_t>(labelend_[static_cast<std::size_t>(b)])];
                b = in(v);
                v = endpoint_[static_cast<std::size_t>(labelend_[static_cast<std::size_t>(b)])];
            }
            if (w != -1) std::swap(v, w);
        }
        for (int b : path) label_[static_cast<std::size_t>(b)] = 1;
        return base;
    }

    void add_blossom(int base, int k) {
        int v = edges_[static_cast<std::size_t>(k)].u;
        int w = edges_[static_cast<std::size_t>(k)].v;
        int bb = in(base), bv = in(v), bw = in(w);
        int b = unused_.back();
        unused_.pop_back();
        auto B = static_cast<std::size_t>(b);
        blossombase_[B] = base;
        blossomparent_[B] = -1;
        blossomparent_[static_cast<std::size_t>(bb)] = b;
        std::vector<int> path, endps;
        while (bv != bb) {
            blossomparent_[static_cast<std::size_t>(bv)] = b;
            path.push_back(bv);
            endps.push_back(labelend_[static_cast<std::size_t>(bv)]);
            v = endpoint_[static_cast<std::size_t>(labelend_[static_cast<std::size_t>(bv)])];
            bv = in(v);
        }
        path.push_back(bb);
        std::reverse(path.begin(), path.end());
        std::reverse(endps.begin(), endps.end());
        endps.push_back(2 * k);
        while (bw != bb) {
            blossomparent_[static_cast<std::size_t>(bw)] = b;
            path.push_back(bw);
            endps.push_back(labelend_[static_cast<std::size_t>(bw)] ^ 1);
            w = endpoint_[static_cast<std::size_t>(labelend_[static_cast<std::size_t>(bw)])];
            bw = in(w);
        }
        label_[B] = 1;
        labelend_[B] = labelend_[static_cast<std::size_t>(bb)];
        dualvar_[B] = 0;
        blossomchilds_[B] = path;
        blossomendps_[B] = endps;
        std::vector<int> lv;
        leaves(b, lv);
        for (int x : lv) {
            if (label_[static_cast<std::size_t>(in(x))] == 2) queue_.push_back(x);
            inblossom_[static_cast<std::size_t>(x)] = b;
        }
        std::vector<int> bestedgeto(static_cast<std::size_t>(2 * n_), -1);
        for (int sub : path) {
            auto S = static_cast<std::size_t>(sub);
            std::vector<int> nblist;
            if (!hasbestedges_[S]) {
                std::vector<int> sl;
                leaves(sub, sl);
                for (int x : sl)
                    for (int p : neighbend_[static_cast<std::size_t>(x)]) nblist.push_back(p / 2);
            } else {
                nblist = blossombestedges_[S];
            }
            for (int kk : nblist) {
                int i = edges_[static_cast<std::size_t>(kk)].u;
                int j = edges_[static_cast<std::size_t>(kk)].v;
                if (in(j) == b) std::swap(i, j);
                int bj = in(j);
                if (bj != b && label_[static_cast<std::size_t>(bj)] == 1 &&
                    (bestedgeto[static_cast<std::size_t>(bj)] == -1 ||
                     slack(kk) < slack(bestedgeto[static_cast<std::size_t>(bj)])))
                    bestedgeto[static_cast<std::size_t>(bj)] = kk;
            }
            blossombestedges_[S].clear();
            hasbestedges_[S] = 0;
            bestedge_[S] = -1;
        }
        auto& be = blossombestedges_[B];
        be.clear();
        for (int kk : bestedgeto)
            if (kk != -1) be.push_back(kk);
        hasbestedges_[B] = 1;
        bestedge_[B] = -1;
        for (int kk : be)
            if (bestedge_[B] == -1 || slack(kk) < slack(bestedge_[B])) bestedge_[B] = kk;
    }

    void expand_blossom(int b, bool endstage) {
        auto B = static_cast<std::size_t>(b);
        std::vector<int> childs = blossomchilds_[B];
        for (int s : childs) {
            blossomparent_[static_cast<std::size_t>(s)] = -1;
            if (s < n_) {
                inblossom_[static_cast<std::size_t>(s)] = s;
            } else if (endstage && dualvar_[static_cast<std::size_t>(s)] == 0) {
                expand_blossom(s, endstage);
            } else {
                std::vector<int> lv;
                leaves(s, lv);
                for (int x : lv) inblossom_[static_cast<std::size_t>(x)] = s;
            }
        }
        if (!endstage && label_[B] == 2) {
            const auto& endps = blossomendps_[B];
            const int len = static_cast<int>(childs.size());
            auto at = [len](const std::vector<int>& vec, int idx) { return vec[static_cast<std::size_t>(((idx % len) + len) % len)]; };
            int entrychild = in(endpoint_[static_cast<std::size_t>(labelend_[B] ^ 1)]);
            int j = static_cast<int>(std::find(childs.begin(), childs.end(), entrychild) - childs.begin());
            int jstep, endptrick;
            if (j & 1) {
                j -= len;
                jstep = 1;
                endptrick = 0;
            } else {
                jstep = -1;
                endptrick = 1;
            }
            int p = labelend_[B];
            while (j != 0) {
                label_[static_cast<std::size_t>(endpoint_[static_cast<std::size_t>(p ^ 1)])] = 0;
                label_[static_cast<std::size_t>(
                    endpoint_[static_cast<std::size_t>(at(endps, j - endptrick) ^ endptrick ^ 1)])] = 0;
                assign_label(endpoint_[static_cast<std::size_t>(p ^ 1)], 2, p);
                allowedge_[static_cast<std::size_t>(at(endps, j - endptrick) / 2)] = 1;
                j += jstep;
                p = at(endps, j - endptrick) ^ endptrick;
                allowedge_[static_cast<std::size_t>(p / 2)] = 1;
                j += jstep;
            }
            int bv = at(childs, j);
            label_[static_cast<std::size_t>(endpoint_[static_cast<std::size_t>(p ^ 1)])] = label_[static_cast<std::size_t>(bv)] = 2;
            labelend_[static_cast<std::size_t>(endpoint_[static_cast<std::size_t>(p ^ 1)])] =
                labelend_[static_cast<std::size_t>(bv)] = p;
            bestedge_[static_cast<std::size_t>(bv)] = -1;
            j += jstep;
            while (at(childs, j) != entrychild) {
                bv = at(childs, j);
                if (label_[static_cast<std::size_t>(bv)] == 1) {
                    j += jstep;
                    continue;
                }
                std::vector<int> lv;
                leaves(bv, lv);
                int found = -1;
                for (int x : lv) {
                    if (label_[static_cast<std::size_t>(x)] != 0) {
                        found = x;
                        break;
                    }
                }
                if (found >= 0) {
                    label_[static_cast<std::size_t>(found)] = 0;
                    label_[static_cast<std::size_t>(endpoint_[static_cast<std::size_t>(
                        mate_[static_cast<std::size_t>(blossombase_[static_cast<std::size_t>(bv)])])])] = 0;
                    assign_label(found, 2, labelend_[static_cast<std::size_t>(found)]);
                }
                j += jstep;
            }
        }
        label_[B] = labelend_[B] = -1;
        blossomchilds_[B].clear();
        blossomendps_[B].clear();
        blossombase_[B] = -1;
        blossombestedges_[B].clear();
        hasbestedges_[B] = 0;
        bestedge_[B] = -1;
        unused_.push_back(b);
    }

    void augment_blossom(int b, int v) {
        auto B = static_cast<std::size_t>(b);
        int t = v;
        while (blossomparent_[static_cast<std::size_t>(t)] != b) t = blossomparent_[static_cast<std::size_t>(t)];
        if (t >= n_) augment_blossom(t, v);
        auto& childs = blossomchilds_[B];
        auto& endps = blossomendps_[B];
        const int len = static_cast<int>(childs.size());
        auto idx = [len](int k) { return static_cast<std::size_t>(((k % len) + len) % len); };
        int i = static_cast<int>(std::find(childs.begin(), childs.end(), t) - childs.begin());
        int j = i;
        int jstep, endptrick;
        if (i & 1) {
            j -= len;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        while (j != 0) {
            j += jstep;
            t = childs[idx(j)];
            int p = endps[idx(j - endptrick)] ^ endptrick;
            if (t >= n_) augment_blossom(t, endpoint_[static_cast<std::size_t>(p)]);
            j += jstep;
            t = childs[idx(j)];
            if (t >= n_) augment_blossom(t, endpoint_[static_cast<std::size_t>(p ^ 1)]);
            mate_[static_cast<std::size_t>(endpoint_[static_cast<std::size_t>(p)])] = p ^ 1;
            mate_[static_cast<std::size_t>(endpoint_[static_cast<std::size_t>(p ^ 1)])] = p;
        }
        std::rotate(childs.begin(), childs.begin() + i, childs.end());
        std::rotate(endps.begin(), endps.begin() + i, endps.end());
        blossombase_[B] = blossombase_[static_cast<std::size_t>(childs[0])];
    }

    void augment_matching(int k) {
        const int v0 = edges_[static_cast<std::size_t>(k)].u;
        const int w0 = edges_[static_cast<std::size_t>(k)].v;
        const int starts[2][2] = {{v0, 2 * k + 1}, {w0, 2 * k}};
        for (const auto& sp : starts) {
            int s = sp[0];
            int p = sp[1];
            while (true) {
                int bs = in(s);
                if (bs >= n_) augment_blossom(bs, s);
                mate_[static_cast<std::size_t>(s)] = p;
                if (labelend_[static_cast<std::size_t>(bs)] == -1) break;
                int t = endpoint_[static_cast<std::size_t>(labelend_[static_cast<std::size_t>(bs)])];
                int bt = in(t);
                s = endpoint_[static_cast<std::size_t>(labelend_[static_cast<std::size_t>(bt)])];
                int j = endpoint_[static_cast<std::size_t>(labelend_[static_cast<std::size_t>(bt)] ^ 1)];
                if (bt >= n_) augment_blossom(bt, j);
                mate_[static_cast<std::size_t>(j)] = labelend_[static_cast<std::size_t>(bt)];
                p = labelend_[static_cast<std::size_t>(bt)] ^ 1;
            }
        }
    }

    int n_;
    const std::vector<WeightedEdge>& edges_;
    bool max_card_;
    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_;
    std::vector<int> label_;
    std::vector<int> labelend_;
    std::vector<int> inblossom_;
    std::vector<int> blossomparent_;
    std::vector<std::vector<int>> blossomchilds_;
    std::vector<std::vector<int>> blossomendps_;
    std::vector<int> blossombase_;
    std::vector<int> unused_;
    std::vector<int> bestedge_;
    std::vector<std::vector<int>> blossombestedges_;
    std::vector<std::uint8_t> hasbestedges_;
    std::vector<std::int64_t> dualvar_;
    std::vector<std::uint8_t> allowedge_;
    std::vector<int> queue_;
};

}  // namespace detail

/// Maximum-weight matching; with `max_cardinality` the weight is maximized
/// among maximum-cardinality matchings. Returns mate[v] (or -1).
inline std::vector<int> max_weight_matching(int num_vertices, const std::vector<WeightedEdge>& edges,
                                            bool max_cardinality = false) {
    for (const auto& e : edges)
        if (e.u < 0 || e.v < 0 || e.u >= num_vertices || e.v >= num_vertices || e.u == e.v)
            throw InvalidParameter("max_weight_matching: bad edge endpoint");
    return detail::BlossomMatcher(num_vertices, edges, max_cardinality).run();
}

/// Exact minimum-weight perfect matching. Throws Infeasible when no perfect
/// matching exists.
inline std::vector<int> min_weight_perfect_matching(int num_vertices, const std::vector<WeightedEdge>& edges) {
    if (num_vertices % 2 != 0) throw Infeasible("min_weight_perfect_matching: odd vertex count");
    if (num_vertices == 0) return {};
    std::int64_t maxw = 0;
    for (const auto& e : edges) maxw = std::max(maxw, e.w);
    std::vector<WeightedEdge> flipped;
    flipped.reserve(edges.size());
    for (const auto& e : edges) {
        if (e.w < 0) throw InvalidParameter("min_weight_perfect_matching: negative weight");
        flipped.push_back({e.u, e.v, maxw + 1 - e.w});
    }
    auto mate = max_weight_matching(num_vertices, flipped, true);
    for (int m : mate)
        if (m < 0) throw Infeasible("min_weight_perfect_matching: graph has no perfect matching");
    return mate;
}

}  // namespace exdec
