// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT
#pragma once

// Concrete executor for closed processes. Outputs go to one global ether and
// stay there until an input consumes them; restriction, output, decryption
// and parallel split are performed eagerly. Depth counts the scheduling
// decisions: replication unfoldings and message deliveries.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lysa/cfa.hpp"

namespace lysa {

struct RuntimeValue {
    Name name;
    /// Distinguishes names minted by different executions of a restriction; 0 for free names.
    std::uint64_t serial = 0;
    std::vector<RuntimeValue> payload;
    std::vector<RuntimeValue> key;  // one element for ciphertexts
    CryptoPoint at;
    PointSet dest;

    [[nodiscard]] bool is_name() const { return key.empty(); }
    [[nodiscard]] std::string str() const;
    bool operator==(const RuntimeValue&) const = default;
};

using RuntimeTuple = std::vector<RuntimeValue>;

struct Event {
    enum class Kind : std::uint8_t { sent, bound, decrypted, stuck };
    Kind kind = Kind::sent;
    RuntimeTuple tuple;      // sent
    Variable variable;       // bound
    RuntimeValue value;      // bound
    CryptoPoint at;          // decrypted: the decryption point
    CryptoPoint origin;      // decrypted: where the ciphertext was made
    bool violation = false;  // decrypted: the dest/orig annotations disagree
    std::string reason;      // stuck

    [[nodiscard]] std::string str() const;
};

using Trace = std::vector<Event>;

struct Scheduler {
    enum class Policy : std::uint8_t {
        /// deliveries first, then the least unfolded replication
        honest,
        /// replayed messages first, then as honest
        replay_first,
        /// uniformly random among enabled steps
        seeded,
    };
    Policy policy = Policy::honest;
    std::uint64_t seed = 0;
    /// Replications already unfolded this often are left alone.
    std::uint32_t max_unfolds = UINT32_MAX;

    static Scheduler honest() { return {}; }
    static Scheduler replay_first() { return {Policy::replay_first, 0}; }
    static Scheduler seeded(std::uint64_t seed) { return {Policy::seeded, seed}; }
};

Trace run(const ProcessPtr& p, int depth, const Scheduler& schedule = Scheduler::honest());

/// As `run`, with an attacker that eavesdrops everything and may deliver any
/// captured tuple to a waiting input, rewriting its matched prefix with
/// values it knows.
Trace replay_run(const ProcessPtr& p, const std::vector<RuntimeTuple>& captured, int depth,
                 const Scheduler& schedule = Scheduler::replay_first());

struct ExploreStats {
    std::size_t states = 0;
    std::size_t pruned = 0;
    std::size_t events = 0;
    bool stopped = false;
};

/// Exhaustive search over every schedule of at most `depth` steps. `on_event`
/// is called once per distinct event; returning false ends the search.
ExploreStats explore(const ProcessPtr& p, int depth, const std::vector<RuntimeTuple>& captured,
                     const std::function<bool(const Event&)>& on_event);

/// Every tuple sent during an honest run in which each replication is
/// unfolded once, as an eavesdropper records them.
std::vector<RuntimeTuple> capture(const ProcessPtr& p, int depth);

/// A binding made in round `round` to a name minted in an earlier round. The
/// round is the last index of both the variable and the name.
bool stale_binding(const Event& e, int round);

AbstractTree abstract(const RuntimeValue& v, const IndexPolicy& policy = {});

/// Whether every sent tuple, binding and annotation violation of `trace` is
/// accounted for by `result`. On failure `why` receives the first offending event.
bool covered(const Trace& trace, const AnalysisResult& result, std::string* why = nullptr);
bool covered(const Event& event, const AnalysisResult& result);

} // namespace lysa
