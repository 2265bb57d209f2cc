#pragma once

#include <any>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "gridsched/errors.hpp"
#include "gridsched/sim/event.hpp"
#include "gridsched/sim/process.hpp"

namespace gridsched::sim {

class Engine;
class Entity;

using EventFilter = std::function<bool(const Event&)>;

// Per-run summary: final clock, delivered-event counts per entity, and a
// digest of the delivered event trace. Two runs of the same scenario must
// produce identical reports.
struct SimulationReport {
    SimTime final_clock = 0.0;
    std::uint64_t total_delivered = 0;
    std::uint64_t trace_digest = 0;
    std::vector<std::pair<std::string, std::uint64_t>> delivered_by_entity;  // id order

    std::string to_string() const;
};

struct EngineConfig {
    // Max resumptions per entity per run before RunawayEntity is raised.
    std::uint64_t step_budget = 10'000'000;
};

// Handle passed to an entity body; all simulation primitives go through it.
class Context {
public:
    SimTime now() const;
    EntityId self() const { return self_; }
    Engine& engine() const { return *engine_; }

    // Inserts an event at now() + delay. Events to self are permitted.
    void schedule(EntityId destination, SimTime delay, int tag, std::any data = {}) const;
    void schedule_self(SimTime delay, int tag, std::any data = {}) const;

    EntityId lookup(std::string_view name) const;
    const std::string& name_of(EntityId id) const;

    // Awaitable: suspends the entity until now() + duration.
    [[nodiscard]] auto hold(SimTime duration) const;
    // Awaitable: suspends until the next event for this entity (optionally the
    // next one matching `filter`; non-matching events stay in the mailbox).
    [[nodiscard]] auto wait_event(EventFilter filter = nullptr) const;
    // Awaitable hold that ends early when a matching event arrives; yields
    // nullopt on timeout.
    [[nodiscard]] auto wait_event_until(EventFilter filter, SimTime timeout) const;
    // Non-blocking mailbox pop.
    std::optional<Event> try_next_event() const;

private:
    friend class Engine;
    Context(Engine* engine, EntityId self) : engine_(engine), self_(self) {}

    Engine* engine_;
    EntityId self_;
};

// Base class for simulated entities. The body() coroutine encodes the
// entity's behaviour; the engine resumes exactly one body at a time.
class Entity {
public:
    explicit Entity(std::string name) : name_(std::move(name)) {}
    virtual ~Entity() = default;

    Entity(const Entity&) = delete;
    Entity& operator=(const Entity&) = delete;

    virtual Process body(Context& ctx) = 0;

    const std::string& name() const { return name_; }
    EntityId id() const { return id_; }

private:
    friend class Engine;
    std::string name_;
    EntityId id_ = kNoEntity;
};

// Deterministic process-oriented discrete-event engine: a timestamp-ordered
// future event queue, a monotone clock, and cooperative entity processes.
// Single logical timeline; run independent Engine instances for parallel
// experiment sweeps.
class Engine {
public:
    explicit Engine(EngineConfig config = {});
    ~Engine();

    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    // Registers an entity; the engine owns it. Names must be unique.
    template <typename T>
    T& add_entity(std::unique_ptr<T> entity) {
        T& ref = *entity;
        register_entity_(std::move(entity));
        return ref;
    }

    template <typename T, typename... Args>
    T& make_entity(Args&&... args) {
        return add_entity(std::make_unique<T>(std::forward<Args>(args)...));
    }

    SimTime now() const { return clock_; }
    int entity_count() const { return static_cast<int>(entities_.size()); }
    EntityId find_entity(std::string_view name) const;  // throws UnknownEntity
    const std::string& entity_name(EntityId id) const;

    // Inserts an event at now() + delay with the next sequence number.
    void schedule(EntityId source, EntityId destination, SimTime delay, int tag,
                  std::any data = {});
    // Absolute-time variant; at_time must be >= now().
    void schedule_at(EntityId source, EntityId destination, SimTime at_time, int tag,
                     std::any data = {});

    // Runs until the future event queue drains. May be called once.
    SimulationReport run();

private:
    friend class Context;
    struct HoldAwaiter;
    struct EventAwaiter;
    struct TimedEventAwaiter;

    enum class Mode { Created, Running, Waiting, Holding, Finished };

    struct EntityState {
        Entity* entity = nullptr;
        std::unique_ptr<Context> ctx;
        Process::Handle handle = nullptr;
        Mode mode = Mode::Created;
        std::deque<Event> mailbox;    // delivered, unconsumed (arrival order)
        EventFilter wait_filter;      // active only in Waiting mode
        std::optional<Event> pending_delivery;
        std::uint64_t wait_session = 0;  // invalidates stale timeout wakeups
        std::uint64_t resumptions = 0;
        std::uint64_t delivered = 0;
    };

    struct QueueOrder {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;  // min-heap on (time, seq)
            return a.seq > b.seq;
        }
    };

    void register_entity_(std::unique_ptr<Entity> entity);
    EntityState& state_(EntityId id);
    const EntityState& state_(EntityId id) const;
    void check_registered_(EntityId id, const char* what) const;
    void insert_event_(Event ev);
    void deliver_(Event ev);
    void resume_(EntityState& st);
    void handle_timeout_(const Event& wakeup);
    void begin_hold_(EntityId id, SimTime duration);
    void begin_wait_(EntityId id, EventFilter filter);
    void begin_timed_wait_(EntityId id, EventFilter filter, SimTime timeout);
    std::optional<Event> take_matching_(EntityId id, const EventFilter& filter);
    Event take_pending_(EntityId id);
    std::optional<Event> take_pending_optional_(EntityId id);
    void digest_update_(const Event& ev);
    void destroy_handles_() noexcept;

    EngineConfig config_;
    SimTime clock_ = 0.0;
    std::uint64_t next_seq_ = 0;
    std::priority_queue<Event, std::vector<Event>, QueueOrder> queue_;
    std::vector<std::unique_ptr<Entity>> entities_;
    std::deque<EntityState> states_;
    std::map<std::string, EntityId, std::less<>> by_name_;
    bool ran_ = false;
    std::uint64_t total_delivered_ = 0;
    std::uint64_t digest_ = 14695981039346656037ull;  // FNV-1a offset basis
};

struct Engine::HoldAwaiter {
    Engine* engine;
    EntityId self;
    SimTime duration;

    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<>) const { engine->begin_hold_(self, duration); }
    void await_resume() const noexcept {}
};

struct Engine::EventAwaiter {
    Engine* engine;
    EntityId self;
    EventFilter filter;
    std::optional<Event> ready;

    bool await_ready() {
        ready = engine->take_matching_(self, filter);
        return ready.has_value();
    }
    void await_suspend(std::coroutine_handle<>) { engine->begin_wait_(self, std::move(filter)); }
    Event await_resume() {
        if (ready) return std::move(*ready);
        return engine->take_pending_(self);
    }
};

struct Engine::TimedEventAwaiter {
    Engine* engine;
    EntityId self;
    EventFilter filter;
    SimTime timeout;
    std::optional<Event> ready;

    bool await_ready() {
        ready = engine->take_matching_(self, filter);
        return ready.has_value();
    }
    void await_suspend(std::coroutine_handle<>) {
        engine->begin_timed_wait_(self, std::move(filter), timeout);
    }
    std::optional<Event> await_resume() {
        if (ready) return std::move(ready);
        return engine->take_pending_optional_(self);
    }
};

inline auto Context::hold(SimTime duration) const {
    if (!(duration >= 0.0)) {
        throw InvalidDelay("hold: negative duration for entity " + name_of(self_));
    }
    return Engine::HoldAwaiter{engine_, self_, duration};
}

inline auto Context::wait_event(EventFilter filter) const {
    return Engine::EventAwaiter{engine_, self_, std::move(filter), std::nullopt};
}

inline auto Context::wait_event_until(EventFilter filter, SimTime timeout) const {
    if (!(timeout >= 0.0)) {
        throw InvalidDelay("wait_event_until: negative timeout for entity " + name_of(self_));
    }
    return Engine::TimedEventAwaiter{engine_, self_, std::move(filter), timeout, std::nullopt};
}

// Convenience filters.
inline EventFilter match_tag(int tag) {
    return [tag](const Event& ev) { return ev.tag == tag; };
}

inline EventFilter match_tag_from(int tag, EntityId source) {
    return [tag, source](const Event& ev) { return ev.tag == tag && ev.source == source; };
}

}  // namespace gridsched::sim
