#include "gridsched/sim/engine.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

namespace gridsched::sim {

namespace {

// Reserved tags for hold()/timed-wait wakeups; never enter a mailbox or the
// report.
constexpr int kWakeupTag = std::numeric_limits<int>::min();
constexpr int kTimeoutTag = std::numeric_limits<int>::min() + 1;

void fnv1a_mix(std::uint64_t& h, std::uint64_t value) {
    constexpr std::uint64_t kPrime = 1099511628211ull;
    for (int i = 0; i < 8; ++i) {
        h ^= (value >> (i * 8)) & 0xffu;
        h *= kPrime;
    }
}

std::string format_time(SimTime t) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", t);
    return buf;
}

}  // namespace

std::string SimulationReport::to_string() const {
    std::ostringstream out;
    out << "final_clock=" << format_time(final_clock) << "\n";
    out << "total_delivered=" << total_delivered << "\n";
    out << "trace_digest=" << trace_digest << "\n";
    for (const auto& [name, count] : delivered_by_entity) {
        out << name << "=" << count << "\n";
    }
    return out.str();
}

Engine::Engine(EngineConfig config) : config_(config) {}

Engine::~Engine() {
    // Coroutine frames may reference their entities; tear them down first.
    destroy_handles_();
}

void Engine::destroy_handles_() noexcept {
    for (auto& st : states_) {
        if (st.handle) {
            st.handle.destroy();
            st.handle = nullptr;
        }
    }
}

void Engine::register_entity_(std::unique_ptr<Entity> entity) {
    if (ran_) {
        throw SimError("cannot register entities after run()");
    }
    const auto [it, inserted] = by_name_.try_emplace(entity->name(), entity_count());
    if (!inserted) {
        throw SimError("duplicate entity name: " + entity->name());
    }
    const EntityId id = it->second;
    entity->id_ = id;
    EntityState st;
    st.entity = entity.get();
    st.ctx = std::unique_ptr<Context>(new Context(this, id));
    states_.push_back(std::move(st));
    entities_.push_back(std::move(entity));
}

Engine::EntityState& Engine::state_(EntityId id) {
    return states_[static_cast<std::size_t>(id)];
}

const Engine::EntityState& Engine::state_(EntityId id) const {
    return states_[static_cast<std::size_t>(id)];
}

void Engine::check_registered_(EntityId id, const char* what) const {
    if (id < 0 || id >= entity_count()) {
        throw UnknownEntity(std::string(what) + ": unknown entity id " + std::to_string(id));
    }
}

EntityId Engine::find_entity(std::string_view name) const {
    const auto it = by_name_.find(name);
    if (it == by_name_.end()) {
        throw UnknownEntity("no entity named '" + std::string(name) + "'");
    }
    return it->second;
}

const std::string& Engine::entity_name(EntityId id) const {
    check_registered_(id, "entity_name");
    return state_(id).entity->name();
}

void Engine::schedule(EntityId source, EntityId destination, SimTime delay, int tag,
                      std::any data) {
    if (!(delay >= 0.0)) {
        throw InvalidDelay("schedule: negative delay " + format_time(delay));
    }
    check_registered_(destination, "schedule");
    insert_event_(Event{clock_ + delay, source, destination, tag, 0, std::move(data)});
}

void Engine::schedule_at(EntityId source, EntityId destination, SimTime at_time, int tag,
                         std::any data) {
    if (!(at_time >= clock_)) {
        throw InvalidDelay("schedule_at: time " + format_time(at_time) + " is before clock " +
                           format_time(clock_));
    }
    check_registered_(destination, "schedule_at");
    insert_event_(Event{at_time, source, destination, tag, 0, std::move(data)});
}

void Engine::insert_event_(Event ev) {
    ev.seq = next_seq_++;
    queue_.push(std::move(ev));
}

void Engine::digest_update_(const Event& ev) {
    fnv1a_mix(digest_, std::bit_cast<std::uint64_t>(ev.time));
    fnv1a_mix(digest_, static_cast<std::uint64_t>(static_cast<std::int64_t>(ev.source)));
    fnv1a_mix(digest_, static_cast<std::uint64_t>(static_cast<std::int64_t>(ev.destination)));
    fnv1a_mix(digest_, static_cast<std::uint64_t>(static_cast<std::int64_t>(ev.tag)));
    fnv1a_mix(digest_, ev.seq);
}

void Engine::resume_(EntityState& st) {
    if (!st.handle || st.handle.done() || st.mode == Mode::Finished) {
        return;
    }
    if (++st.resumptions > config_.step_budget) {
        throw RunawayEntity("entity '" + st.entity->name() + "' exceeded " +
                            std::to_string(config_.step_budget) + " resumptions");
    }
    st.mode = Mode::Running;
    st.handle.resume();
    if (st.handle.done()) {
        st.mode = Mode::Finished;
        if (st.handle.promise().exception) {
            std::rethrow_exception(st.handle.promise().exception);
        }
    }
    // Otherwise the suspending awaiter already moved the entity to
    // Waiting or Holding.
}

void Engine::begin_hold_(EntityId id, SimTime duration) {
    EntityState& st = state_(id);
    insert_event_(Event{clock_ + duration, id, id, kWakeupTag, 0, {}});
    st.mode = Mode::Holding;
}

void Engine::begin_wait_(EntityId id, EventFilter filter) {
    EntityState& st = state_(id);
    st.wait_filter = std::move(filter);
    st.mode = Mode::Waiting;
}

void Engine::begin_timed_wait_(EntityId id, EventFilter filter, SimTime timeout) {
    EntityState& st = state_(id);
    st.wait_filter = std::move(filter);
    st.mode = Mode::Waiting;
    ++st.wait_session;
    insert_event_(Event{clock_ + timeout, id, id, kTimeoutTag, 0, st.wait_session});
}

void Engine::handle_timeout_(const Event& wakeup) {
    EntityState& st = state_(wakeup.destination);
    const auto session = std::any_cast<std::uint64_t>(wakeup.data);
    if (st.mode != Mode::Waiting || session != st.wait_session) {
        return;  // stale: the wait already ended via a delivery
    }
    st.wait_filter = nullptr;
    st.pending_delivery.reset();
    resume_(st);
}

std::optional<Event> Engine::take_matching_(EntityId id, const EventFilter& filter) {
    EntityState& st = state_(id);
    for (auto it = st.mailbox.begin(); it != st.mailbox.end(); ++it) {
        if (!filter || filter(*it)) {
            Event ev = std::move(*it);
            st.mailbox.erase(it);
            return ev;
        }
    }
    return std::nullopt;
}

Event Engine::take_pending_(EntityId id) {
    EntityState& st = state_(id);
    Event ev = std::move(*st.pending_delivery);
    st.pending_delivery.reset();
    return ev;
}

std::optional<Event> Engine::take_pending_optional_(EntityId id) {
    EntityState& st = state_(id);
    std::optional<Event> ev = std::move(st.pending_delivery);
    st.pending_delivery.reset();
    return ev;
}

void Engine::deliver_(Event ev) {
    EntityState& st = state_(ev.destination);
    ++st.delivered;
    ++total_delivered_;
    digest_update_(ev);
    if (st.mode == Mode::Waiting && (!st.wait_filter || st.wait_filter(ev))) {
        st.pending_delivery = std::move(ev);
        st.wait_filter = nullptr;
        ++st.wait_session;  // cancels any outstanding timeout wakeup
        resume_(st);
    } else {
        // Waiting-with-filter mismatches also land here so mailbox order
        // stays arrival order.
        st.mailbox.push_back(std::move(ev));
    }
}

SimulationReport Engine::run() {
    if (ran_) {
        throw SimError("Engine::run may only be called once");
    }
    ran_ = true;

    // All bodies start at clock 0 in registration order.
    for (auto& st : states_) {
        st.handle = st.entity->body(*st.ctx).release();
        resume_(st);
    }

    while (!queue_.empty()) {
        Event ev = queue_.top();
        queue_.pop();
        clock_ = ev.time;  // non-decreasing: insertions never precede the clock
        if (ev.tag == kWakeupTag) {
            resume_(state_(ev.destination));
        } else if (ev.tag == kTimeoutTag) {
            handle_timeout_(ev);
        } else {
            deliver_(std::move(ev));
        }
    }

    // Entities still blocked when the queue drains are finalized silently.
    destroy_handles_();

    SimulationReport report;
    report.final_clock = clock_;
    report.total_delivered = total_delivered_;
    report.trace_digest = digest_;
    report.delivered_by_entity.reserve(states_.size());
    for (const auto& st : states_) {
        report.delivered_by_entity.emplace_back(st.entity->name(), st.delivered);
    }
    return report;
}

SimTime Context::now() const { return engine_->now(); }

void Context::schedule(EntityId destination, SimTime delay, int tag, std::any data) const {
    engine_->schedule(self_, destination, delay, tag, std::move(data));
}

void Context::schedule_self(SimTime delay, int tag, std::any data) const {
    engine_->schedule(self_, self_, delay, tag, std::move(data));
}

EntityId Context::lookup(std::string_view name) const { return engine_->find_entity(name); }

const std::string& Context::name_of(EntityId id) const { return engine_->entity_name(id); }

std::optional<Event> Context::try_next_event() const {
    return engine_->take_matching_(self_, nullptr);
}

}  // namespace gridsched::sim
