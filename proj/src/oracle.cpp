// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT

#include "lysa/oracle.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string_view>
#include <unordered_map>

namespace lysa {

std::string RuntimeValue::str() const {
    if (is_name()) {
        return serial == 0 ? name.str() : name.str() + "#" + std::to_string(serial % 100000);
    }
    std::string out = "{";
    for (std::size_t i = 0; i < payload.size(); ++i) {
        out += (i > 0 ? ", " : "") + payload[i].str();
    }
    out += "}:";
    const std::string k = key.front().str();
    out += key.front().is_name() ? k : "(" + k + ")";
    return out + " [at " + at.str() + " dest " + dest.str() + "]";
}

std::string Event::str() const {
    switch (kind) {
    case Kind::sent: {
        std::string out = "sent <";
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            out += (i > 0 ? ", " : "") + tuple[i].str();
        }
        return out + ">";
    }
    case Kind::bound:
        return "bound " + variable.str() + " = " + value.str();
    case Kind::decrypted:
        return "decrypted at " + at.str() + " from " + origin.str() + (violation ? " (violation)" : "");
    case Kind::stuck:
        return "stuck: " + reason;
    }
    return {};
}

namespace {

using Vid = std::uint32_t;

struct Node {
    bool enc = false;
    Name name;
    std::uint64_t serial = 0;
    std::vector<Vid> kids;  // key first
    CryptoPoint at;
    PointSet dest;

    auto operator<=>(const Node&) const = default;
};

class Values {
  public:
    Vid name(const Name& n, std::uint64_t serial) {
        Node node;
        node.name = n;
        node.serial = serial;
        return intern(std::move(node));
    }

    Vid enc(std::vector<Vid> kids, const CryptoPoint& at, const PointSet& dest) {
        Node node;
        node.enc = true;
        node.kids = std::move(kids);
        node.at = at;
        node.dest = dest;
        return intern(std::move(node));
    }

    [[nodiscard]] const Node& node(Vid v) const { return nodes_[v]; }
    /// Id of the value with every annotation removed; equality of erased ids is matching.
    [[nodiscard]] Vid erased(Vid v) const { return erased_[v]; }

    RuntimeValue materialize(Vid v) const {
        const Node& n = nodes_[v];
        RuntimeValue out;
        if (!n.enc) {
            out.name = n.name;
            out.serial = n.serial;
            return out;
        }
        out.key.push_back(materialize(n.kids[0]));
        for (std::size_t i = 1; i < n.kids.size(); ++i) {
            out.payload.push_back(materialize(n.kids[i]));
        }
        out.at = n.at;
        out.dest = n.dest;
        return out;
    }

    Vid import(const RuntimeValue& v) {
        if (v.is_name()) {
            return name(v.name, v.serial);
        }
        std::vector<Vid> kids{import(v.key.front())};
        for (const auto& p : v.payload) {
            kids.push_back(import(p));
        }
        return enc(std::move(kids), v.at, v.dest);
    }

  private:
    Vid intern(Node node) {
        if (auto it = index_.find(node); it != index_.end()) {
            return it->second;
        }
        std::optional<Vid> er;
        if (node.enc) {
            Node bare;
            bare.enc = true;
            for (auto k : node.kids) {
                bare.kids.push_back(erased_[k]);
            }
            if (!(bare == node)) {
                er = intern(std::move(bare));
            }
        }
        const auto id = static_cast<Vid>(nodes_.size());
        index_.emplace(node, id);
        nodes_.push_back(std::move(node));
        erased_.push_back(er.value_or(id));
        return id;
    }

    std::map<Node, Vid> index_;
    std::vector<Node> nodes_;
    std::vector<Vid> erased_;
};

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
    return h ^ (h >> 31);
}

struct Env {
    std::map<Variable, Vid> vars;
    std::map<Name, Vid> names;
};

struct Thread {
    const Process* p = nullptr;
    // Shared between copies; replaced on write.
    std::shared_ptr<const Env> env = std::make_shared<Env>();
    /// Hash of the path of parallel splits and unfoldings that created the thread.
    std::uint64_t lineage = 0;
    std::uint32_t unfolds = 0;
    // Filled in when the thread parks.
    std::vector<Vid> prefix;
    std::uint64_t digest = 0;
};

struct State {
    std::vector<Thread> waiting;
    std::vector<std::vector<Vid>> ether;
    std::set<Vid> knowledge;  // erased ids; tracked only when replaying
};

struct Action {
    enum class Kind : std::uint8_t { deliver, replay, unfold };
    Kind kind;
    std::size_t thread;
    std::size_t message;
};

using Emit = std::function<void(Event)>;

class Engine {
  public:
    Engine(const ProcessPtr& root, const std::vector<RuntimeTuple>& captured) : root_(root) {
        number(root.get());
        for (const auto& t : captured) {
            std::vector<Vid> ids;
            for (const auto& v : t) {
                ids.push_back(values_.import(v));
            }
            captured_.push_back(std::move(ids));
        }
        replaying_ = !captured_.empty();
    }

    State initial(const Emit& emit) {
        State s;
        if (replaying_) {
            for (const auto& n : free_names(root_)) {
                s.knowledge.insert(values_.name(n, 0));
            }
            for (const auto& t : captured_) {
                learn(s, t);
            }
        }
        Thread t;
        t.p = root_.get();
        settle(s, std::move(t), emit);
        return s;
    }

    std::vector<Action> enabled(const State& s) const {
        std::vector<Action> out;
        for (std::size_t i = 0; i < s.waiting.size(); ++i) {
            enabled_for(s, i, out);
        }
        return out;
    }

    void enabled_for(const State& s, std::size_t i, std::vector<Action>& out) const {
        const Thread& t = s.waiting[i];
        if (std::holds_alternative<Replication>(t.p->node)) {
            out.push_back({Action::Kind::unfold, i, 0});
            return;
        }
        const auto& in = std::get<Input>(t.p->node);
        const std::size_t arity = in.match.size() + in.bind.size();
        std::set<std::vector<Vid>> seen;
        for (std::size_t m = 0; m < s.ether.size(); ++m) {
            const auto& msg = s.ether[m];
            if (msg.size() == arity && prefix_matches(t.prefix, msg) && seen.insert(msg).second) {
                out.push_back({Action::Kind::deliver, i, m});
            }
        }
        if (!replaying_) {
            return;
        }
        const bool known = std::all_of(t.prefix.begin(), t.prefix.end(),
                                       [&](Vid v) { return s.knowledge.contains(values_.erased(v)); });
        if (!known) {
            return;
        }
        for (std::size_t c = 0; c < captured_.size(); ++c) {
            if (captured_[c].size() == arity) {
                out.push_back({Action::Kind::replay, i, c});
            }
        }
    }

    struct Effect {
        std::size_t threads = 0;
        std::size_t outputs = 0;
    };

    /// Performs `a`; the effect counts threads parked by it and messages sent.
    Effect apply(State& s, const Action& a, const Emit& emit) {
        const std::size_t threads = parked_;
        const std::size_t outputs = sent_;
        perform(s, a, emit);
        return {parked_ - threads, sent_ - outputs};
    }

    /// With a set installed, each event is emitted only the first time it occurs.
    void dedupe(std::set<std::vector<std::uint64_t>>* seen) { seen_ = seen; }

    void perform(State& s, const Action& a, const Emit& emit) {
        Thread t = std::move(s.waiting[a.thread]);
        s.waiting.erase(s.waiting.begin() + static_cast<std::ptrdiff_t>(a.thread));
        if (a.kind == Action::Kind::unfold) {
            Thread copy;
            copy.p = std::get<Replication>(t.p->node).body.get();
            copy.env = t.env;
            copy.lineage = mix(mix(t.lineage, 3), t.unfolds);
            ++t.unfolds;
            s.waiting.push_back(std::move(t));
            settle(s, std::move(copy), emit);
            return;
        }
        const auto& in = std::get<Input>(t.p->node);
        std::vector<Vid> msg;
        if (a.kind == Action::Kind::deliver) {
            msg = s.ether[a.message];
            s.ether.erase(s.ether.begin() + static_cast<std::ptrdiff_t>(a.message));
        } else {
            msg = t.prefix;
            const auto& c = captured_[a.message];
            msg.insert(msg.end(), c.begin() + static_cast<std::ptrdiff_t>(in.match.size()), c.end());
        }
        for (std::size_t i = 0; i < in.bind.size(); ++i) {
            bind(t, in.bind[i], msg[in.match.size() + i], emit);
        }
        t.p = in.cont.get();
        settle(s, std::move(t), emit);
    }

    void report_waiting(const State& s, const Emit& emit) const {
        for (const auto& t : s.waiting) {
            if (std::holds_alternative<Input>(t.p->node) && fresh({4})) {
                Event e;
                e.kind = Event::Kind::stuck;
                e.reason = "no matching input for a waiting receiver";
                emit(std::move(e));
            }
        }
    }

    /// Order-insensitive 128-bit fingerprint of a state.
    std::pair<std::uint64_t, std::uint64_t> fingerprint(const State& s) const {
        const std::hash<std::string_view> h;
        std::vector<std::uint64_t> parts;
        parts.reserve(s.waiting.size() + s.ether.size() + 1);
        for (const auto& t : s.waiting) {
            parts.push_back(t.digest + 0x9e3779b97f4a7c15ULL * (t.unfolds + 1));
        }
        auto bytes = [](const auto& v) {
            return std::string_view(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(v.front()));
        };
        for (const auto& m : s.ether) {
            parts.push_back(h(bytes(m)) ^ 0x5bd1e995ULL);
        }
        const std::vector<Vid> known(s.knowledge.begin(), s.knowledge.end());
        parts.push_back(known.empty() ? 0 : h(bytes(known)));
        std::sort(parts.begin(), parts.end());
        const std::uint64_t a = h(bytes(parts));
        parts.push_back(0xa5a5a5a5a5a5a5a5ULL);
        return {a, h(bytes(parts))};
    }

    const Values& values() const { return values_; }

  private:
    void number(const Process* p) {
        if (!index_.emplace(p, index_.size()).second) {
            return;
        }
        std::visit(overloaded{
                       [&](const Nil&) {},
                       [&](const Parallel& n) {
                           number(n.left.get());
                           number(n.right.get());
                       },
                       [&](const Replication& n) { number(n.body.get()); },
                       [&](const Restriction& n) { number(n.body.get()); },
                       [&](const Output& n) { number(n.cont.get()); },
                       [&](const Input& n) { number(n.cont.get()); },
                       [&](const Decryption& n) { number(n.cont.get()); },
                   },
                   p->node);
    }

    Vid eval(const Term& term, const Thread& t) {
        return std::visit(overloaded{
                              [&](const Name& n) {
                                  auto it = t.env->names.find(n);
                                  return it != t.env->names.end() ? it->second : values_.name(n, 0);
                              },
                              [&](const Variable& v) {
                                  auto it = t.env->vars.find(v);
                                  if (it == t.env->vars.end()) {
                                      throw Error("unbound variable " + v.str() + " during execution");
                                  }
                                  return it->second;
                              },
                              [&](const Encryption& e) {
                                  std::vector<Vid> kids{eval(*e.key, t)};
                                  for (const auto& p : e.payload) {
                                      kids.push_back(eval(p, t));
                                  }
                                  return values_.enc(std::move(kids), e.at, e.dest);
                              },
                          },
                          term.node);
    }

    bool prefix_matches(const std::vector<Vid>& prefix, const std::vector<Vid>& msg) const {
        for (std::size_t i = 0; i < prefix.size(); ++i) {
            if (values_.erased(prefix[i]) != values_.erased(msg[i])) {
                return false;
            }
        }
        return true;
    }

    void park(State& s, Thread t) {
        // The binders in scope are fixed by the node, so the values alone identify the environment.
        std::uint64_t d = mix(index_.at(t.p), t.lineage);
        for (const auto& [v, id] : t.env->vars) {
            d = mix(d, id);
        }
        for (const auto& [n, id] : t.env->names) {
            d = mix(d, id);
        }
        t.digest = d;
        t.prefix.clear();
        if (const auto* in = std::get_if<Input>(&t.p->node)) {
            for (const auto& m : in->match) {
                t.prefix.push_back(eval(m, t));
            }
        }
        s.waiting.push_back(std::move(t));
        ++parked_;
    }

    void learn(State& s, const std::vector<Vid>& msg) const {
        for (auto v : msg) {
            s.knowledge.insert(values_.erased(v));
        }
    }

    bool fresh(std::vector<std::uint64_t> key) const { return seen_ == nullptr || seen_->insert(std::move(key)).second; }

    void bind(Thread& t, const Variable& x, Vid v, const Emit& emit) {
        auto env = std::make_shared<Env>(*t.env);
        env->vars[x] = v;
        t.env = std::move(env);
        if (!fresh({1, values_.name(Name{x.id}, ~std::uint64_t{0}), v})) {
            return;
        }
        Event e;
        e.kind = Event::Kind::bound;
        e.variable = x;
        e.value = values_.materialize(v);
        emit(std::move(e));
    }

    void stuck(const Decryption& d, std::size_t code, const Emit& emit) {
        if (!fresh({3, index_.at(current_), code})) {
            return;
        }
        Event e;
        e.kind = Event::Kind::stuck;
        e.reason = "decryption at " + d.at.str();
        if (code == 0) {
            e.reason += " of a value of the wrong shape";
        } else if (code == 1) {
            e.reason += " with the wrong key";
        } else {
            e.reason += " fails to match component " + std::to_string(code - 1);
        }
        emit(std::move(e));
    }

    void settle(State& s, Thread t, const Emit& emit) {
        for (;;) {
            const Process& p = *t.p;
            if (std::holds_alternative<Nil>(p.node)) {
                return;
            }
            if (const auto* n = std::get_if<Parallel>(&p.node)) {
                Thread right = t;
                right.p = n->right.get();
                right.lineage = mix(right.lineage, 2);
                t.p = n->left.get();
                t.lineage = mix(t.lineage, 1);
                settle(s, std::move(right), emit);
                continue;
            }
            if (std::holds_alternative<Replication>(p.node) || std::holds_alternative<Input>(p.node)) {
                park(s, std::move(t));
                return;
            }
            if (const auto* n = std::get_if<Restriction>(&p.node)) {
                const std::uint64_t serial = mix(t.lineage, index_.at(&p)) | 1U;
                auto env = std::make_shared<Env>(*t.env);
                env->names[n->name] = values_.name(n->name, serial);
                t.env = std::move(env);
                t.p = n->body.get();
                continue;
            }
            if (const auto* n = std::get_if<Output>(&p.node)) {
                std::vector<Vid> msg;
                for (const auto& term : n->terms) {
                    msg.push_back(eval(term, t));
                }
                std::vector<std::uint64_t> key{0};
                key.insert(key.end(), msg.begin(), msg.end());
                if (fresh(std::move(key))) {
                    Event e;
                    e.kind = Event::Kind::sent;
                    for (auto v : msg) {
                        e.tuple.push_back(values_.materialize(v));
                    }
                    emit(std::move(e));
                }
                if (replaying_) {
                    learn(s, msg);
                }
                s.ether.push_back(std::move(msg));
                ++sent_;
                t.p = n->cont.get();
                continue;
            }
            const auto& d = std::get<Decryption>(p.node);
            current_ = &p;
            if (!decrypt(t, d, emit)) {
                return;
            }
            t.p = d.cont.get();
        }
    }

    bool decrypt(Thread& t, const Decryption& d, const Emit& emit) {
        const Vid subject = eval(d.subject, t);
        const Node& node = values_.node(subject);
        const std::size_t arity = d.match.size() + d.bind.size();
        if (!node.enc || node.kids.size() != arity + 1) {
            stuck(d, 0, emit);
            return false;
        }
        const std::vector<Vid> kids = node.kids;
        const CryptoPoint origin = node.at;
        const PointSet dest = node.dest;
        if (values_.erased(kids[0]) != values_.erased(eval(d.key, t))) {
            stuck(d, 1, emit);
            return false;
        }
        for (std::size_t i = 0; i < d.match.size(); ++i) {
            if (values_.erased(kids[i + 1]) != values_.erased(eval(d.match[i], t))) {
                stuck(d, i + 2, emit);
                return false;
            }
        }
        for (std::size_t i = 0; i < d.bind.size(); ++i) {
            bind(t, d.bind[i], kids[d.match.size() + i + 1], emit);
        }
        if (!fresh({2, index_.at(current_), subject})) {
            return true;
        }
        Event e;
        e.kind = Event::Kind::decrypted;
        e.at = d.at;
        e.origin = origin;
        e.violation = !d.orig.contains(origin) || !dest.contains(d.at);
        emit(std::move(e));
        return true;
    }

    ProcessPtr root_;
    Values values_;
    std::unordered_map<const Process*, std::size_t> index_;
    std::vector<std::vector<Vid>> captured_;
    bool replaying_ = false;
    std::set<std::vector<std::uint64_t>>* seen_ = nullptr;
    const Process* current_ = nullptr;
    std::size_t parked_ = 0;
    std::size_t sent_ = 0;
};

std::size_t choose(const std::vector<Action>& actions, const State& s, const Scheduler& schedule,
                   std::mt19937_64& rng) {
    if (schedule.policy == Scheduler::Policy::seeded) {
        return std::uniform_int_distribution<std::size_t>(0, actions.size() - 1)(rng);
    }
    auto first_of = [&](Action::Kind k) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < actions.size(); ++i) {
            if (actions[i].kind == k) {
                return i;
            }
        }
        return std::nullopt;
    };
    const auto replay = first_of(Action::Kind::replay);
    if (schedule.policy == Scheduler::Policy::replay_first && replay) {
        return *replay;
    }
    if (auto d = first_of(Action::Kind::deliver)) {
        return *d;
    }
    if (replay) {
        return *replay;
    }
    std::size_t best = 0;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (s.waiting[actions[i].thread].unfolds < s.waiting[actions[best].thread].unfolds) {
            best = i;
        }
    }
    return best;
}

Trace run_with(const ProcessPtr& p, const std::vector<RuntimeTuple>& captured, int depth,
               const Scheduler& schedule) {
    Trace trace;
    const Emit emit = [&](Event e) { trace.push_back(std::move(e)); };
    Engine engine(p, captured);
    State s = engine.initial(emit);
    std::mt19937_64 rng(schedule.seed);
    for (int step = 0; step < depth; ++step) {
        auto actions = engine.enabled(s);
        std::erase_if(actions, [&](const Action& a) {
            return a.kind == Action::Kind::unfold && s.waiting[a.thread].unfolds >= schedule.max_unfolds;
        });
        if (actions.empty()) {
            engine.report_waiting(s, emit);
            return trace;
        }
        if (schedule.policy == Scheduler::Policy::replay_first) {
            // Keep only the replays after which the receiver is still alive.
            const Emit quiet = [](const Event&) {};
            std::erase_if(actions, [&](const Action& a) {
                if (a.kind != Action::Kind::replay) {
                    return false;
                }
                State trial = s;
                const auto effect = engine.apply(trial, a, quiet);
                return effect.threads == 0 && effect.outputs == 0;
            });
            if (actions.empty()) {
                engine.report_waiting(s, emit);
                return trace;
            }
        }
        engine.apply(s, actions[choose(actions, s, schedule, rng)], emit);
    }
    return trace;
}

std::string event_key(const Event& e) {
    std::string k = std::to_string(static_cast<int>(e.kind)) + ":";
    switch (e.kind) {
    case Event::Kind::sent:
        for (const auto& v : e.tuple) {
            k += v.str() + "\x1f";
        }
        break;
    case Event::Kind::bound:
        k += e.variable.str() + "=" + e.value.str();
        break;
    case Event::Kind::decrypted:
        k += e.at.str() + "<" + e.origin.str();
        break;
    case Event::Kind::stuck:
        k += e.reason;
        break;
    }
    return k;
}

struct PairHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const {
        return static_cast<std::size_t>(p.first ^ (p.second * 0x9e3779b97f4a7c15ULL));
    }
};

} // namespace

Trace run(const ProcessPtr& p, int depth, const Scheduler& schedule) { return run_with(p, {}, depth, schedule); }

Trace replay_run(const ProcessPtr& p, const std::vector<RuntimeTuple>& captured, int depth,
                 const Scheduler& schedule) {
    return run_with(p, captured, depth, schedule);
}

ExploreStats explore(const ProcessPtr& p, int depth, const std::vector<RuntimeTuple>& captured,
                     const std::function<bool(const Event&)>& on_event) {
    ExploreStats stats;
    std::set<std::string> seen;
    const Emit emit = [&](Event e) {
        if (stats.stopped || !seen.insert(event_key(e)).second) {
            return;
        }
        ++stats.events;
        if (!on_event(e)) {
            stats.stopped = true;
        }
    };
    Engine engine(p, captured);
    std::set<std::vector<std::uint64_t>> raw;
    engine.dedupe(&raw);
    std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, int, PairHash> visited;

    std::function<void(const State&, int)> dfs = [&](const State& s, int budget) {
        if (stats.stopped) {
            return;
        }
        auto [it, fresh] = visited.emplace(engine.fingerprint(s), budget);
        if (!fresh) {
            if (it->second >= budget) {
                ++stats.pruned;
                return;
            }
            it->second = budget;
        }
        ++stats.states;
        if (budget == 0) {
            return;
        }
        const auto actions = engine.enabled(s);
        if (actions.empty()) {
            engine.report_waiting(s, emit);
            return;
        }
        for (const auto& a : actions) {
            State next = s;
            const auto effect = engine.apply(next, a, emit);
            if (a.kind != Action::Kind::unfold) {
                // A receiver that dies without sending or parking leaves a state
                // its predecessor already dominates.
                if (effect.threads > 0 || effect.outputs > 0) {
                    dfs(next, budget - 1);
                }
            } else if (effect.threads == 1 && effect.outputs == 0 &&
                       std::holds_alternative<Input>(next.waiting.back().p->node)) {
                // An unfolding that only parks a receiver commutes with every
                // other step, so it is taken together with its first delivery.
                if (budget < 2) {
                    continue;
                }
                std::vector<Action> follow;
                engine.enabled_for(next, next.waiting.size() - 1, follow);
                for (const auto& f : follow) {
                    State after = next;
                    const auto e2 = engine.apply(after, f, emit);
                    if (e2.threads > 0 || e2.outputs > 0) {
                        dfs(after, budget - 2);
                    }
                    if (stats.stopped) {
                        return;
                    }
                }
            } else {
                dfs(next, budget - 1);
            }
            if (stats.stopped) {
                return;
            }
        }
    };
    dfs(engine.initial(emit), depth);
    return stats;
}

std::vector<RuntimeTuple> capture(const ProcessPtr& p, int depth) {
    std::vector<RuntimeTuple> out;
    Scheduler once = Scheduler::honest();
    once.max_unfolds = 1;
    for (auto& e : run(p, depth, once)) {
        if (e.kind == Event::Kind::sent) {
            out.push_back(std::move(e.tuple));
        }
    }
    return out;
}

bool stale_binding(const Event& e, int round) {
    if (e.kind != Event::Kind::bound || !e.value.is_name() || e.value.serial == 0) {
        return false;
    }
    const auto& var = e.variable.id.indices;
    const auto& name = e.value.name.id.indices;
    return !var.empty() && !name.empty() && var.back() == round && name.back() < round;
}

AbstractTree abstract(const RuntimeValue& v, const IndexPolicy& policy) {
    AbstractTree t;
    if (v.is_name()) {
        t.name = canonical(v.name, policy).tag;
        return t;
    }
    t.key.push_back(abstract(v.key.front(), policy));
    for (const auto& p : v.payload) {
        t.payload.push_back(abstract(p, policy));
    }
    t.at = v.at;
    t.dest = v.dest;
    return t;
}

bool covered(const Event& e, const AnalysisResult& result) {
    switch (e.kind) {
    case Event::Kind::sent: {
        std::vector<AbstractTree> tuple;
        for (const auto& v : e.tuple) {
            tuple.push_back(abstract(v, result.policy));
        }
        return kappa_contains(result, tuple);
    }
    case Event::Kind::bound:
        return member(result, abstract(e.value, result.policy), result.rho_of(canonical(e.variable)));
    case Event::Kind::decrypted:
        return !e.violation || result.psi.contains({e.origin, e.at});
    case Event::Kind::stuck:
        return true;
    }
    return true;
}

bool covered(const Trace& trace, const AnalysisResult& result, std::string* why) {
    for (const auto& e : trace) {
        if (!covered(e, result)) {
            if (why != nullptr) {
                *why = e.str();
            }
            return false;
        }
    }
    return true;
}

} // namespace lysa
