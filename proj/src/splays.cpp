#include "ia/splays.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ia {

namespace store {

std::vector<Name> dom(const Store& s) {
    std::vector<Name> d;
    d.reserve(s.size());
    for (auto& p : s) d.push_back(p.first);
    return d;
}

bool has(const Store& s, Name a) {
    for (auto& p : s)
        if (p.first == a) return true;
    return false;
}

std::int64_t at(const Store& s, Name a) {
    for (auto& p : s)
        if (p.first == a) return p.second;
    throw std::out_of_range("name not in store");
}

Store restrict(const Store& s, const Store& t) {
    Store r;
    for (auto& p : s)
        if (!has(t, p.first)) r.push_back(p);
    return r;
}

Store update(const Store& s, const Store& t) {
    Store r = s;
    for (auto& p : r)
        for (auto& q : t)
            if (q.first == p.first) p.second = q.second;
    return r;
}

Store update_from_seq(const Store& s, const std::vector<const Store*>& u) {
    Store r = s;
    for (auto& p : r)
        for (auto it = u.rbegin(); it != u.rend(); ++it) {
            const Store& t = **it;
            auto f = std::find_if(t.begin(), t.end(), [&](auto& q) { return q.first == p.first; });
            if (f != t.end()) {
                p.second = f->second;
                break;
            }
        }
    return r;
}

std::optional<Store> append(const Store& s, const Store& t) {
    for (auto& p : s)
        if (has(t, p.first)) return std::nullopt;
    Store r = s;
    r.insert(r.end(), t.begin(), t.end());
    return r;
}

bool rel(const Store& s, const Store& t, Rel kind) {
    auto a = dom(s), b = dom(t);
    switch (kind) {
    case Rel::Prefix: return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
    case Rel::Suffix: return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.end() - a.size());
    case Rel::Subseq: {
        std::size_t i = 0;
        for (std::size_t j = 0; j < b.size() && i < a.size(); ++j)
            if (a[i] == b[j]) ++i;
        return i == a.size();
    }
    }
    return false;
}

Store nice(const Store& s0, const Store& s1, const Store& s2) {
    auto r = append(restrict(update(s0, s2), restrict(s1, s2)), restrict(s2, s1));
    if (!r) throw std::logic_error("nice: overlapping stores");
    return *r;
}

std::string to_string(const Store& s) {
    std::string o = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) o += ",";
        o += "n" + std::to_string(s[i].first) + "=" + std::to_string(s[i].second);
    }
    return o + "}";
}

}

using store::Rel;

SPlay SPlay::prefix(std::size_t n) const {
    SPlay p{arena, {}};
    p.moves.assign(moves.begin(), moves.begin() + std::min(n, moves.size()));
    return p;
}

bool same_play(const SPlay& a, const SPlay& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const SMove &x = a.moves[i], &y = b.moves[i];
        if (x.store != y.store || x.just != y.just) return false;
        if (a.arena->name(x.move) != b.arena->name(y.move) || a.arena->side[x.move] != b.arena->side[y.move]) return false;
    }
    return true;
}

std::vector<int> pview_indices(const SPlay& s, int upto) {
    std::vector<int> r;
    int k = upto;
    while (k >= 0) {
        if (s.is_p(k)) {
            r.push_back(k);
            --k;
        } else {
            r.push_back(k);
            int j = s.moves[k].just;
            if (j < 0) break;
            r.push_back(j);
            k = j - 1;
        }
    }
    std::reverse(r.begin(), r.end());
    return r;
}

std::vector<int> oview_indices(const SPlay& s, int upto) {
    std::vector<int> r;
    int k = upto;
    while (k >= 0) {
        if (!s.is_p(k)) {
            r.push_back(k);
            --k;
        } else {
            r.push_back(k);
            int j = s.moves[k].just;
            if (j < 0) break;
            r.push_back(j);
            k = j - 1;
        }
    }
    std::reverse(r.begin(), r.end());
    return r;
}

namespace {
SPlay view_of(const SPlay& s, const std::vector<int>& idx) {
    SPlay v{s.arena, {}};
    std::map<int, int> pos;
    for (int i : idx) {
        SMove m = s.moves[i];
        auto it = pos.find(m.just);
        m.just = it == pos.end() ? -1 : it->second;
        pos[i] = (int)v.moves.size();
        v.moves.push_back(std::move(m));
    }
    return v;
}
}

SPlay pview(const SPlay& s) { return s.size() ? view_of(s, pview_indices(s, (int)s.size() - 1)) : s; }
SPlay oview(const SPlay& s) { return s.size() ? view_of(s, oview_indices(s, (int)s.size() - 1)) : s; }

std::string to_string(const Violation& v) {
    return v.condition + " at move " + std::to_string(v.position + 1) + (v.detail.empty() ? "" : ": " + v.detail);
}

namespace {

bool answered_before(const SPlay& s, int q, int upto) {
    for (int k = q + 1; k <= upto; ++k)
        if (s.moves[k].just == q && !s.is_q(k)) return true;
    return false;
}

int pending_question(const SPlay& s, int upto) {
    for (int k = upto; k >= 0; --k)
        if (s.is_q(k) && !answered_before(s, k, upto)) return k;
    return -1;
}

std::optional<Violation> play_at(const SPlay& s, int k) {
    const Prearena& A = *s.arena;
    const SMove& m = s.moves[k];
    if (m.move < 0 || m.move >= A.size()) return Violation{"justified sequence", k, "unknown move"};
    if (k == 0) {
        if (!A.is_initial(m.move) || m.just != -1) return Violation{"justified sequence", k, "first move must be initial"};
        return std::nullopt;
    }
    if (m.just < 0 || m.just >= k) return Violation{"justified sequence", k, "missing or forward justifier"};
    if (!A.enabled_by(s.moves[m.just].move, m.move))
        return Violation{"justified sequence", k, A.name(s.moves[m.just].move) + " does not enable " + A.name(m.move)};
    if (s.label(k).player == s.label(k - 1).player) return Violation{"Alternation", k, ""};
    if (!s.is_q(k) && pending_question(s, k - 1) != m.just) return Violation{"Well-Bracketing", k, "answer to a non-pending question"};
    auto view = s.is_p(k) ? pview_indices(s, k - 1) : oview_indices(s, k - 1);
    if (std::find(view.begin(), view.end(), m.just) == view.end()) return Violation{"Visibility", k, "justifier not in view"};
    return std::nullopt;
}

bool store_wellformed(const Store& st, int N) {
    std::set<Name> seen;
    for (auto& [a, v] : st) {
        if (!seen.insert(a).second) return false;
        if (N >= 0 && (v < 0 || v > N)) return false;
    }
    return true;
}

bool name_in_prefix(const SPlay& s, Name a, int upto) {
    for (int k = 0; k <= upto; ++k)
        if (store::has(s.moves[k].store, a)) return true;
    return false;
}

std::optional<Violation> store_at(const SPlay& s, int k, int cond, int N) {
    const SMove& m = s.moves[k];
    const Store& T = m.store;
    switch (cond) {
    case 0:
        if (!store_wellformed(T, N)) return Violation{"Store", k, "repeated name or value out of range"};
        return std::nullopt;
    case 1:
        if (k == 0 && !T.empty()) return Violation{"Init", k, "initial store must be empty"};
        return std::nullopt;
    case 2:
        if (k > 0 && s.is_p(k)) {
            const Store& S = s.moves[m.just].store;
            if (!store::rel(S, T, Rel::Prefix)) return Violation{"Just-P", k, "justifier store is not a prefix"};
            if (!s.is_q(k) && !store::rel(T, S, Rel::Prefix)) return Violation{"Just-P", k, "answer store differs in domain"};
        }
        return std::nullopt;
    case 3:
        if (k > 0 && !s.is_p(k)) {
            const Store& S = s.moves[m.just].store;
            if (!store::rel(S, T, Rel::Prefix) || !store::rel(T, S, Rel::Prefix))
                return Violation{"Just-O", k, "domain differs from justifier"};
        }
        return std::nullopt;
    case 4:
        if (k > 0 && s.is_p(k) && s.is_q(k) && !s.is_p(k - 1)) {
            const Store& S = s.moves[k - 1].store;
            Store dropped = store::restrict(S, T);
            if (!store::rel(dropped, S, Rel::Suffix)) return Violation{"Prev-PQ", k, "dropped names are not a suffix"};
            if (!store::rel(store::restrict(S, dropped), T, Rel::Prefix))
                return Violation{"Prev-PQ", k, "kept names are not a prefix"};
            for (auto& [a, v] : store::restrict(T, S))
                if (name_in_prefix(s, a, k - 1)) return Violation{"Prev-PQ", k, "(a) introduced name is not fresh"};
            for (auto& [a, v] : dropped)
                if (!is_closed_in(s, k - 1, a)) return Violation{"Prev-PQ", k, "(b) dropped name is not closed"};
        }
        return std::nullopt;
    case 5:
        if (k > 0 && !s.is_p(k)) {
            for (auto& [a, v] : T) {
                for (int l = k - 1; l >= 0; --l) {
                    if (!store::has(s.moves[l].store, a)) continue;
                    if (s.is_p(l) && store::at(s.moves[l].store, a) != v)
                        return Violation{"Val-O", k, "O changed a private value"};
                    break;
                }
            }
        }
        return std::nullopt;
    }
    return std::nullopt;
}

}

bool is_closed_in(const SPlay& s, int upto, Name a) {
    for (int k = 0; k <= upto; ++k)
        if (s.is_q(k) && store::has(s.moves[k].store, a) && !answered_before(s, k, upto)) return false;
    return true;
}

std::optional<Violation> check_play(const SPlay& s) {
    for (int k = 0; k < (int)s.size(); ++k)
        if (auto v = play_at(s, k)) return v;
    return std::nullopt;
}

std::optional<Violation> validate_splay(const SPlay& s, int N) {
    if (auto v = check_play(s)) return v;
    for (int cond = 0; cond <= 5; ++cond)
        for (int k = 0; k < (int)s.size(); ++k)
            if (auto v = store_at(s, k, cond, N)) return v;
    return std::nullopt;
}

std::optional<Violation> validate_last(const SPlay& s, int N) {
    int k = (int)s.size() - 1;
    if (k < 0) return std::nullopt;
    if (auto v = play_at(s, k)) return v;
    for (int cond = 0; cond <= 5; ++cond)
        if (auto v = store_at(s, k, cond, N)) return v;
    return std::nullopt;
}

std::optional<Violation> derived_checks(const SPlay& s) {
    int n = (int)s.size();
    for (int k = 1; k < n; ++k) {
        if (!(s.is_p(k) && !s.is_q(k))) continue;
        const Store &S = s.moves[k - 1].store, &T = s.moves[k].store;
        Store dropped = store::restrict(S, T);
        if (!store::rel(dropped, S, Rel::Suffix)) return Violation{"Prev-PA", k, "dropped names are not a suffix"};
        if (!store::rel(store::restrict(S, dropped), T, Rel::Prefix)) return Violation{"Prev-PA", k, "kept names are not a prefix"};
        for (auto& [a, v] : T)
            if (!store::has(S, a)) return Violation{"Prev-PA", k, "(a) answer introduces a name"};
        for (auto& [a, v] : dropped)
            if (!is_closed_in(s, k - 1, a)) return Violation{"Prev-PA", k, "(b) dropped name is not closed"};
    }
    std::vector<Name> names = names_of(s);
    std::map<Name, int> intro;
    for (int k = 0; k < n; ++k)
        for (auto& [a, v] : s.moves[k].store) intro.emplace(a, k);
    for (int e = 0; e < n; ++e) {
        auto view = pview_indices(s, e);
        for (Name a : names) {
            int first = -1, last = -1;
            for (int i = 0; i < (int)view.size(); ++i)
                if (store::has(s.moves[view[i]].store, a)) {
                    if (first < 0) first = i;
                    last = i;
                }
            if (first < 0) continue;
            for (int i = first; i <= last; ++i)
                if (!store::has(s.moves[view[i]].store, a)) return Violation{"Block form", e, "gap in the block of a name"};
            if (view[first] != intro[a]) return Violation{"Block form", e, "block does not start at the introducing move"};
        }
    }
    for (int k = 1; k < n; ++k) {
        if (!(s.is_p(k) && !s.is_p(k - 1))) continue;
        for (auto& [a, v] : store::restrict(s.moves[k - 1].store, s.moves[k].store))
            for (int l = k + 1; l < n; ++l)
                if (store::has(s.moves[l].store, a)) return Violation{"Close", l, "closed name reappears"};
    }
    return std::nullopt;
}

std::optional<Violation> check_innocent(const SPlay& s) {
    std::map<std::string, std::string> seen;
    for (int k = 1; k < (int)s.size(); ++k) {
        if (!s.is_p(k)) continue;
        SPlay v = canonical_names(view_of(s, pview_indices(s, k)));
        SMove last = v.moves.back();
        v.moves.pop_back();
        std::string key = to_text(v), resp = to_text(SPlay{s.arena, {last}});
        resp += std::to_string(last.just);
        auto [it, fresh] = seen.emplace(key, resp);
        if (!fresh && it->second != resp) return Violation{"Innocence", k, "different responses to the same view"};
    }
    return std::nullopt;
}

bool is_complete(const SPlay& s) {
    int n = (int)s.size();
    for (int k = 0; k < n; ++k)
        if (s.is_q(k) && !answered_before(s, k, n - 1)) return false;
    return true;
}

bool is_spinal(const SPlay& s, const std::vector<int>& spine) {
    for (std::size_t k = 0; k < s.size(); ++k) {
        int m = s.moves[k].move;
        for (std::size_t i = 2; i < spine.size(); i += 2)
            if (spine[i] == m && (k == 0 || s.moves[k - 1].move != spine[i - 1])) return false;
    }
    return true;
}

std::vector<Name> names_of(const SPlay& s) {
    std::vector<Name> out;
    for (auto& m : s.moves)
        for (auto& [a, v] : m.store)
            if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    return out;
}

SPlay canonical_names(const SPlay& s, Name base) {
    std::map<Name, Name> ren;
    SPlay r = s;
    for (auto& m : r.moves)
        for (auto& [a, v] : m.store) {
            auto it = ren.find(a);
            if (it == ren.end()) it = ren.emplace(a, base + (Name)ren.size()).first;
            a = it->second;
        }
    return r;
}

namespace {
struct Decorator {
    const SPlay& erasure;
    int max_names, N;
    const std::function<void(const SPlay&)>& f;
    SPlay cur;
    std::size_t visited = 0;

    void stores(int used, std::vector<Name>& dom, std::vector<Store>& out) {
        // every ordered list of distinct names; new names appear in increasing order
        Store st;
        std::function<void(int)> values = [&](std::size_t i) {
            if (i == dom.size()) {
                out.push_back(st);
                return;
            }
            for (int v = 0; v <= N; ++v) {
                st.emplace_back(dom[i], v);
                values(i + 1);
                st.pop_back();
            }
        };
        values(0);
        if ((int)dom.size() == max_names) return;
        Name next_new = used;
        for (Name a : dom)
            if (a >= used) next_new = std::max(next_new, a + 1);
        for (Name a = 0; a < std::min(next_new + 1, max_names); ++a) {
            if (std::find(dom.begin(), dom.end(), a) != dom.end()) continue;
            if (a >= used && a != next_new) continue;
            dom.push_back(a);
            stores(used, dom, out);
            dom.pop_back();
        }
    }

    void go(std::size_t k, int used) {
        if (k == erasure.size()) {
            ++visited;
            f(cur);
            return;
        }
        std::vector<Name> dom;
        std::vector<Store> cands;
        stores(used, dom, cands);
        for (auto& st : cands) {
            SMove m = erasure.moves[k];
            m.store = st;
            cur.moves.push_back(m);
            if (!validate_last(cur, N)) {
                int u = used;
                for (auto& [a, v] : st) u = std::max(u, a + 1);
                go(k + 1, u);
            }
            cur.moves.pop_back();
        }
    }
};
}

std::size_t for_each_decoration(const SPlay& erasure, int max_names, int N, const std::function<void(const SPlay&)>& f) {
    Decorator d{erasure, max_names, N, f, SPlay{erasure.arena, {}}};
    d.go(0, 0);
    return d.visited;
}

// ---------------------------------------------------------------- composition

Interaction interact(const SPlay& s, const SPlay& t) {
    const Prearena &AB = *s.arena, &BC = *t.arena;
    if (AB.right.size() != BC.left.size() || AB.right.names.size() != BC.left.names.size())
        throw IncompatibleError("middle arenas differ");
    for (int m = 0; m < AB.right.size(); ++m)
        if (AB.right.labels[m] != BC.left.labels[m]) throw IncompatibleError("middle arenas differ");
    {
        auto ns = names_of(s), nt = names_of(t);
        for (Name a : ns)
            if (std::find(nt.begin(), nt.end(), a) != nt.end()) throw IncompatibleError("shared name n" + std::to_string(a));
    }
    Interaction u;
    std::vector<int> s_pos(s.size(), -1), t_pos(t.size(), -1);
    std::size_t i = 0, j = 0;
    enum { S, T, ExternalO } turn = S;
    bool last_p_in_c = false;
    auto useq = [&](std::size_t upto) {
        std::vector<const Store*> v;
        for (std::size_t k = 0; k < upto; ++k) v.push_back(&u.moves[k].store);
        return v;
    };
    auto last_store = [&]() -> const Store& {
        static const Store empty;
        return u.moves.empty() ? empty : u.moves.back().store;
    };
    while (i < s.size() || j < t.size()) {
        if (turn == ExternalO) {
            bool s_ext = i < s.size() && AB.side[s.moves[i].move] == Side::Left;
            bool t_ext = j < t.size() && BC.side[t.moves[j].move] == Side::Right;
            if (s_ext && t_ext) turn = last_p_in_c ? T : S;
            else if (s_ext) turn = S;
            else if (t_ext) turn = T;
            else throw IncompatibleError("no external O-move available at position " + std::to_string(u.moves.size() + 1));
        }
        if (turn == S) {
            if (i >= s.size()) throw IncompatibleError("left play ends while it holds control");
            const SMove& m = s.moves[i];
            bool pl = AB.label(m.move).player == Player::P;
            if (AB.side[m.move] == Side::Left) {
                InteractionMove im{InteractionMove::A, (int)i, -1, {}, m.just < 0 ? -1 : s_pos[m.just]};
                if (pl) {
                    im.store = store::nice(last_store(), s.moves[i - 1].store, m.store);
                    turn = ExternalO;
                    last_p_in_c = false;
                } else {
                    im.store = im.just < 0 ? Store{} : store::update_from_seq(u.moves[im.just].store, useq(u.moves.size()));
                    turn = S;
                }
                s_pos[i] = (int)u.moves.size();
                u.moves.push_back(std::move(im));
                ++i;
                continue;
            }
            // a B-move: s plays it as P, t must have it next
            if (!pl) throw IncompatibleError("left play expects an O-move in B at position " + std::to_string(i + 1));
            if (j >= t.size()) throw IncompatibleError("right play ends before B-move " + AB.name(m.move));
            const SMove& n = t.moves[j];
            if (BC.side[n.move] != Side::Left || BC.local[n.move] != AB.local[m.move])
                throw IncompatibleError("plays disagree on B at position " + std::to_string(u.moves.size() + 1));
            int js = m.just < 0 ? -1 : s_pos[m.just];
            int jt = n.just < 0 ? -1 : t_pos[n.just];
            // an initial B-move points into A in s and nowhere in t
            if (jt >= 0 && js != jt) throw IncompatibleError("plays disagree on a B pointer at position " + std::to_string(u.moves.size() + 1));
            InteractionMove im{InteractionMove::B, (int)i, (int)j, store::nice(last_store(), s.moves[i - 1].store, m.store), js};
            s_pos[i] = t_pos[j] = (int)u.moves.size();
            u.moves.push_back(std::move(im));
            ++i;
            ++j;
            turn = T;
        } else {
            if (j >= t.size()) throw IncompatibleError("right play ends while it holds control");
            const SMove& m = t.moves[j];
            bool pl = BC.label(m.move).player == Player::P;
            if (BC.side[m.move] == Side::Right) {
                InteractionMove im{InteractionMove::C, -1, (int)j, {}, m.just < 0 ? -1 : t_pos[m.just]};
                if (pl) {
                    im.store = store::nice(last_store(), t.moves[j - 1].store, m.store);
                    turn = ExternalO;
                    last_p_in_c = true;
                } else {
                    im.store = im.just < 0 ? Store{} : store::update_from_seq(u.moves[im.just].store, useq(u.moves.size()));
                    turn = T;
                }
                t_pos[j] = (int)u.moves.size();
                u.moves.push_back(std::move(im));
                ++j;
                continue;
            }
            if (!pl) throw IncompatibleError("right play expects an O-move in B at position " + std::to_string(j + 1));
            if (i >= s.size()) throw IncompatibleError("left play ends before B-move " + BC.name(m.move));
            const SMove& n = s.moves[i];
            if (AB.side[n.move] != Side::Right || AB.local[n.move] != BC.local[m.move])
                throw IncompatibleError("plays disagree on B at position " + std::to_string(u.moves.size() + 1));
            int jt = m.just < 0 ? -1 : t_pos[m.just];
            int js = n.just < 0 ? -1 : s_pos[n.just];
            if (jt >= 0 && js != jt) throw IncompatibleError("plays disagree on a B pointer at position " + std::to_string(u.moves.size() + 1));
            InteractionMove im{InteractionMove::B, (int)i, (int)j, store::nice(last_store(), t.moves[j - 1].store, m.store), js};
            s_pos[i] = t_pos[j] = (int)u.moves.size();
            u.moves.push_back(std::move(im));
            ++i;
            ++j;
            turn = S;
        }
    }
    return u;
}

SPlay compose(const SPlay& s, const SPlay& t, std::shared_ptr<const Prearena> ac) {
    Interaction u = interact(s, t);
    SPlay r{std::move(ac), {}};
    std::vector<int> pos(u.moves.size(), -1);
    for (std::size_t k = 0; k < u.moves.size(); ++k) {
        const InteractionMove& im = u.moves[k];
        if (im.origin == InteractionMove::B) continue;
        int just = im.just;
        while (just >= 0 && u.moves[just].origin == InteractionMove::B) just = u.moves[just].just;
        SMove m;
        if (im.origin == InteractionMove::A) m.move = r.arena->of(Side::Left, s.arena->local[s.moves[im.s_index].move]);
        else m.move = r.arena->of(Side::Right, t.arena->local[t.moves[im.t_index].move]);
        m.store = im.store;
        m.just = just < 0 ? -1 : pos[just];
        pos[k] = (int)r.moves.size();
        r.moves.push_back(std::move(m));
    }
    return r;
}

SPlay compose(const SPlay& s, const SPlay& t) {
    auto ac = std::make_shared<const Prearena>(prearena(s.arena->left, t.arena->right));
    return compose(s, t, ac);
}

// ---------------------------------------------------------------- text format

SPlay parse_splay(const std::string& text, std::shared_ptr<const Prearena> arena) {
    SPlay s{arena, {}};
    std::istringstream is(text);
    std::string line;
    std::map<std::string, int> index_of;
    std::map<std::string, Name> names;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string idx, mv, j;
        if (!(ls >> idx)) continue;
        auto fail = [&](const std::string& msg) { throw std::invalid_argument("line " + std::to_string(lineno) + ": " + msg); };
        if (!(ls >> mv >> j)) fail("expected `<idx> <move> j=<idx>|init {store}`");
        std::string rest;
        std::getline(ls, rest);
        SMove m;
        if (j == "init") {
            m.just = -1;
        } else if (j.rfind("j=", 0) == 0) {
            auto it = index_of.find(j.substr(2));
            if (it == index_of.end()) fail("unknown justifier " + j.substr(2));
            m.just = it->second;
        } else {
            fail("bad justifier field '" + j + "'");
        }
        auto cands = arena->lookup(mv);
        std::vector<int> pick;
        for (int c : cands) {
            bool init = arena->is_initial(c);
            if ((m.just < 0) != init) continue;
            if (m.just >= 0 && !arena->enabled_by(s.moves[m.just].move, c)) continue;
            pick.push_back(c);
        }
        if (pick.empty()) pick = cands;
        if (pick.empty()) fail("unknown move '" + mv + "'");
        if (pick.size() > 1) fail("ambiguous move '" + mv + "' (qualify with L: or R:)");
        m.move = pick[0];
        auto lb = rest.find('{'), rb = rest.find('}');
        if (lb == std::string::npos || rb == std::string::npos || rb < lb) fail("missing store braces");
        std::string body = rest.substr(lb + 1, rb - lb - 1);
        std::istringstream bs(body);
        std::string item;
        while (std::getline(bs, item, ',')) {
            auto b = item.find_first_not_of(" \t");
            if (b == std::string::npos) continue;
            item = item.substr(b);
            auto eq = item.find('=');
            if (eq == std::string::npos) fail("bad store entry '" + item + "'");
            std::string nm = item.substr(0, eq);
            while (!nm.empty() && (nm.back() == ' ' || nm.back() == '\t')) nm.pop_back();
            auto it = names.find(nm);
            if (it == names.end()) it = names.emplace(nm, (Name)names.size()).first;
            try {
                m.store.emplace_back(it->second, std::stoll(item.substr(eq + 1)));
            } catch (const std::exception&) {
                fail("bad store value in '" + item + "'");
            }
        }
        if (index_of.count(idx)) fail("duplicate index " + idx);
        index_of[idx] = (int)s.moves.size();
        s.moves.push_back(std::move(m));
    }
    return s;
}

std::string to_text(const SPlay& s) {
    std::ostringstream os;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const SMove& m = s.moves[k];
        std::string nm = s.arena->name(m.move);
        if (s.arena->lookup(nm).size() > 1) nm = (s.arena->side[m.move] == Side::Left ? "L:" : "R:") + nm;
        os << k + 1 << " " << nm << " " << (m.just < 0 ? std::string("init") : "j=" + std::to_string(m.just + 1)) << " {";
        for (std::size_t i = 0; i < m.store.size(); ++i) {
            if (i) os << ",";
            os << "n" << m.store[i].first << "=" << m.store[i].second;
        }
        os << "}\n";
    }
    return os.str();
}

}
