#include "ia/interp.hpp"

namespace ia {

namespace {

struct OutOfFuel {};

class Machine {
public:
    Machine(Heap h, std::uint64_t fuel, int N) : heap_(std::move(h)), fuel_(fuel), N_(N) {
        next_ = heap_.empty() ? 0 : heap_.rbegin()->first + 1;
    }

    TermP run(TermP t) {
        for (;;) {
            tick();
            if (is_value(t)) {
                // literals outside 0..N are read modulo N+1 in finitary mode
                if (t->tag == Tag::Int && N_ >= 1 && (t->num < 0 || t->num > N_)) return mk::num(arith(BinOp::Add, t->num, 0));
                return t;
            }
            switch (t->tag) {
            case Tag::Bin: {
                std::int64_t i = as_int(run(t->a));
                std::int64_t j = as_int(run(t->b));
                return mk::num(arith(t->op, i, j));
            }
            case Tag::If: {
                std::int64_t i = as_int(run(t->a));
                t = i != 0 ? t->b : t->c;
                continue;
            }
            case Tag::App: {
                TermP f = run(t->a);
                TermP v = run(t->b);
                if (f->tag != Tag::Lambda) throw StuckError("application of a non-function");
                t = substitute_closed(f->a, f->name, v);
                continue;
            }
            case Tag::Let: {
                // let x = M in N is (fn x => N) M: the rule for application and the value rule for the abstraction
                tick();
                TermP v = run(t->a);
                t = t->name == "_" ? t->b : substitute_closed(t->b, t->name, v);
                continue;
            }
            case Tag::Deref: {
                TermP m = run(t->a);
                if (m->tag == Tag::Loc) return mk::num(cell(m->num));
                if (m->tag == Tag::MkVar) {
                    tick();  // V1 () as an application node
                    tick();  // V1 is a value
                    tick();  // () is a value
                    t = substitute_closed(m->a->a, m->a->name, mk::unit());
                    continue;
                }
                throw StuckError("dereference of a non-variable");
            }
            case Tag::Assign: {
                TermP m = run(t->a);
                if (m->tag == Tag::Loc) {
                    std::int64_t i = as_int(run(t->b));
                    cell(m->num);
                    heap_[m->num] = i;
                    return mk::unit();
                }
                if (m->tag == Tag::MkVar) {
                    TermP i = run(t->b);
                    tick();
                    tick();
                    tick();
                    t = substitute_closed(m->b->a, m->b->name, i);
                    continue;
                }
                throw StuckError("assignment to a non-variable");
            }
            case Tag::MkVar: {
                TermP r = run(t->a);
                TermP w = run(t->b);
                return mk::mkvar(r, w);
            }
            case Tag::Fix: {
                TermP v = run(t->a);
                if (v->tag != Tag::Lambda || !v->ty || v->ty->kind != Type::Arrow)
                    throw StuckError("fix of a non-function");
                const std::string x = "$fix";
                return mk::lam(x, v->ty->param, mk::app(mk::app(v, mk::fix(v)), mk::id(x)));
            }
            case Tag::New: {
                std::int64_t a = next_++;
                heap_[a] = 0;
                TermP v = run(substitute_closed(t->a, t->name, mk::loc(a)));
                heap_.erase(a);
                return v;
            }
            case Tag::Ref: {
                std::int64_t a = next_++;
                heap_[a] = 0;
                return mk::loc(a);
            }
            case Tag::While: {
                if (t->a->tag == Tag::Int && arith(BinOp::Add, t->a->num, 0) != 0) {
                    // the guard is constant and nothing can leave the loop
                    used_ = fuel_;
                    throw OutOfFuel{};
                }
                for (;;) {
                    std::int64_t i = as_int(run(t->a));
                    if (i == 0) return mk::unit();
                    run(t->b);
                    tick();
                }
            }
            case Tag::Ident: throw StuckError("free identifier '" + t->name + "'");
            default: throw StuckError("no rule applies");
            }
        }
    }

    Heap heap_;
    std::uint64_t fuel_;
    std::uint64_t used_ = 0;

private:
    void tick() {
        if (used_ >= fuel_) throw OutOfFuel{};
        ++used_;
    }
    std::int64_t as_int(const TermP& v) {
        if (v->tag != Tag::Int) throw StuckError("expected an integer");
        return v->num;
    }
    std::int64_t cell(std::int64_t a) {
        auto it = heap_.find(a);
        if (it == heap_.end()) throw StuckError("dangling location");
        return it->second;
    }
    std::int64_t arith(BinOp op, std::int64_t i, std::int64_t j) const { return ia::arith(op, i, j, N_); }

    int N_;
    std::int64_t next_ = 0;
};

}

std::int64_t arith(BinOp op, std::int64_t i, std::int64_t j, int N) {
    std::int64_t r = 0;
    switch (op) {
    case BinOp::Add: r = i + j; break;
    case BinOp::Sub: r = i - j; break;
    case BinOp::Mul: r = i * j; break;
    }
    if (N >= 1) {
        std::int64_t m = N + 1;
        r = ((r % m) + m) % m;
    }
    return r;
}

EvalResult eval(const Heap& heap, const TermP& t, std::uint64_t fuel, int N) {
    Machine m(heap, fuel, N);
    EvalResult r;
    try {
        r.value = m.run(t);
        r.converged = true;
        r.heap = std::move(m.heap_);
    } catch (const OutOfFuel&) {
        r.converged = false;
    }
    r.used = m.used_;
    return r;
}

Convergence converges(const TermP& t, std::uint64_t fuel, int N) {
    EvalResult r = eval({}, t, fuel, N);
    return r.converged ? Convergence::Yes : Convergence::Unknown;
}

}
