#include "ia/games.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ia {

std::string to_string(Label l) {
    std::string s = l.player == Player::O ? "O" : "P";
    return s + (l.kind == Kind::Q ? "Q" : "A");
}

int Arena::find(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (names[i] == name) return i;
    return -1;
}

int Arena::add(std::string name, Label l) {
    names.push_back(std::move(name));
    labels.push_back(l);
    enables.emplace_back();
    return size() - 1;
}

void Arena::enable(int m, int n) {
    auto& v = enables[m];
    if (std::find(v.begin(), v.end(), n) == v.end()) v.push_back(n);
}

bool Arena::enabled_by(int m, int n) const {
    const auto& v = enables[m];
    return std::find(v.begin(), v.end(), n) != v.end();
}

namespace {
const Label PA{Player::P, Kind::A};
const Label OQ{Player::O, Kind::Q};

Label flip(Label l) { return {l.player == Player::O ? Player::P : Player::O, l.kind}; }
}

Arena unit_arena() {
    Arena a;
    a.add("*", PA);
    a.num_initial = 1;
    return a;
}

Arena int_arena(int N) {
    Arena a;
    for (int j = 0; j <= N; ++j) a.add(std::to_string(j), PA);
    a.num_initial = N + 1;
    return a;
}

Arena arrow(const Arena& a, const Arena& b) {
    Arena r;
    int star = r.add("*", PA);
    r.num_initial = 1;
    std::vector<int> ia(a.size()), ib(b.size());
    for (int m = 0; m < a.size(); ++m)
        ia[m] = r.add("a." + a.names[m], a.is_initial(m) ? OQ : flip(a.labels[m]));
    for (int m = 0; m < b.size(); ++m) ib[m] = r.add("r." + b.names[m], b.labels[m]);
    for (int m = 0; m < a.num_initial; ++m) {
        r.enable(star, ia[m]);
        for (int n = 0; n < b.num_initial; ++n) r.enable(ia[m], ib[n]);
    }
    for (int m = 0; m < a.size(); ++m)
        for (int n : a.enables[m]) r.enable(ia[m], ia[n]);
    for (int m = 0; m < b.size(); ++m)
        for (int n : b.enables[m]) r.enable(ib[m], ib[n]);
    return r;
}

Arena tensor(const std::vector<std::pair<std::string, Arena>>& parts) {
    if (parts.empty()) return unit_arena();
    Arena r;
    // initial tuples in lexicographic order
    std::vector<std::vector<int>> tuples{{}};
    for (auto& [p, a] : parts) {
        std::vector<std::vector<int>> next;
        for (auto& t : tuples)
            for (int i = 0; i < a.num_initial; ++i) {
                auto u = t;
                u.push_back(i);
                next.push_back(std::move(u));
            }
        tuples.swap(next);
    }
    auto qualify = [](const std::string& prefix, const std::string& n) { return prefix.empty() ? n : prefix + "." + n; };
    for (auto& t : tuples) {
        std::string name;
        for (std::size_t k = 0; k < parts.size(); ++k) {
            if (k) name += ",";
            name += qualify(parts[k].first, parts[k].second.names[t[k]]);
        }
        if (parts.size() > 1) name = "(" + name + ")";
        r.add(name, PA);
    }
    r.num_initial = (int)tuples.size();
    std::vector<std::vector<int>> idx(parts.size());
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const Arena& a = parts[k].second;
        idx[k].assign(a.size(), -1);
        for (int m = a.num_initial; m < a.size(); ++m) idx[k][m] = r.add(qualify(parts[k].first, a.names[m]), a.labels[m]);
    }
    for (std::size_t ti = 0; ti < tuples.size(); ++ti)
        for (std::size_t k = 0; k < parts.size(); ++k)
            for (int n : parts[k].second.enables[tuples[ti][k]]) r.enable((int)ti, idx[k][n]);
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const Arena& a = parts[k].second;
        for (int m = a.num_initial; m < a.size(); ++m)
            for (int n : a.enables[m]) r.enable(idx[k][m], idx[k][n]);
    }
    return r;
}

Arena tensor(const Arena& a, const Arena& b) { return tensor({{"1", a}, {"2", b}}); }

Arena denote_type(const TypeP& ty, int N) {
    switch (ty->kind) {
    case Type::Com: return unit_arena();
    case Type::Exp: return int_arena(N);
    case Type::Arrow: return arrow(denote_type(ty->param, N), denote_type(ty->result, N));
    case Type::Var: {
        Arena v = tensor({{"", arrow(unit_arena(), int_arena(N))}, {"", arrow(int_arena(N), unit_arena())}});
        // (1 => Z) (x) (Z => 1) with the conventional move names
        for (auto& n : v.names) {
            if (n == "(*,*)") n = "*";
            else if (n == "a.*") n = "read";
            else if (n.rfind("r.", 0) == 0 && n != "r.*") n = n.substr(2);
            else if (n.rfind("a.", 0) == 0) n = "write(" + n.substr(2) + ")";
            else if (n == "r.*") n = "ok";
        }
        return v;
    }
    }
    throw std::logic_error("denote_type");
}

std::vector<int> Prearena::lookup(const std::string& name) const {
    std::vector<int> out;
    std::string n = name;
    int only = -1;
    if (n.rfind("L:", 0) == 0) {
        only = 0;
        n = n.substr(2);
    } else if (n.rfind("R:", 0) == 0) {
        only = 1;
        n = n.substr(2);
    }
    for (int m = 0; m < size(); ++m) {
        if (game.names[m] != n) continue;
        if (only == 0 && side[m] != Side::Left) continue;
        if (only == 1 && side[m] != Side::Right) continue;
        out.push_back(m);
    }
    return out;
}

Prearena prearena(const Arena& a, const Arena& b) {
    Prearena p;
    p.left = a;
    p.right = b;
    for (int m = 0; m < a.size(); ++m) {
        p.game.add(a.names[m], a.is_initial(m) ? OQ : flip(a.labels[m]));
        p.side.push_back(Side::Left);
        p.local.push_back(m);
    }
    p.game.num_initial = a.num_initial;
    for (int m = 0; m < b.size(); ++m) {
        p.game.add(b.names[m], b.labels[m]);
        p.side.push_back(Side::Right);
        p.local.push_back(m);
    }
    int off = a.size();
    for (int m = 0; m < a.size(); ++m)
        for (int n : a.enables[m]) p.game.enable(m, n);
    for (int m = 0; m < b.size(); ++m)
        for (int n : b.enables[m]) p.game.enable(off + m, off + n);
    for (int i = 0; i < a.num_initial; ++i)
        for (int j = 0; j < b.num_initial; ++j) p.game.enable(i, off + j);
    return p;
}

Prearena prearena_of_judgment(const Context& ctx, const TypeP& ty, int N) {
    std::vector<std::pair<std::string, Arena>> parts;
    for (auto& [x, t] : ctx) parts.emplace_back(x, denote_type(t, N));
    return prearena(tensor(parts), denote_type(ty, N));
}

namespace {
std::string dot_escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '"' || c == '\\') o += '\\';
        o += c;
    }
    return o;
}

void dot_body(std::ostream& os, const Arena& g, const std::vector<std::string>& prefix) {
    for (int m = 0; m < g.size(); ++m) {
        os << "  m" << m << " [label=\"" << dot_escape(prefix[m] + g.names[m]) << "\\n" << to_string(g.labels[m]) << "\"";
        if (g.is_initial(m)) os << ", shape=box";
        os << "];\n";
    }
    for (int m = 0; m < g.size(); ++m)
        for (int n : g.enables[m]) os << "  m" << m << " -> m" << n << ";\n";
}
}

std::string to_dot(const Arena& a, const std::string& title) {
    std::ostringstream os;
    os << "digraph \"" << dot_escape(title) << "\" {\n";
    dot_body(os, a, std::vector<std::string>(a.size()));
    os << "}\n";
    return os.str();
}

std::string to_dot(const Prearena& p, const std::string& title) {
    std::ostringstream os;
    os << "digraph \"" << dot_escape(title) << "\" {\n";
    std::vector<std::string> prefix(p.size());
    for (int m = 0; m < p.size(); ++m) prefix[m] = p.side[m] == Side::Left ? "L:" : "R:";
    dot_body(os, p.game, prefix);
    os << "}\n";
    return os.str();
}

}
