#include "ofqn/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <numeric>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>

#include "ofqn/errors.hpp"

namespace ofqn {

namespace {

enum class Stream : std::uint32_t {
    Arrivals = 1,
    FlowMarking = 2,
    SwitchService = 3,
    ControllerService = 4,
    Reservoir = 5,
    Merge = 6,
};

std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t replication, Stream kind, std::uint32_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), replication,
                      static_cast<std::uint32_t>(kind), index};
    return std::mt19937_64(seq);
}

struct Packet {
    double arrival_time = 0.0;
    std::uint64_t ticket = 0;  // FIFO position at the current station
    std::uint32_t entry_node = 0;
    bool new_flow = false;
    std::uint8_t controller_visits = 0;
};

struct Event {
    double time;
    std::uint64_t seq;
    std::uint32_t station;  // stations [0, N) are switches, N is the controller
    bool arrival;           // for arrivals, station holds the class index

    bool operator>(const Event& other) const {
        return time > other.time || (time == other.time && seq > other.seq);
    }
};

struct Station {
    std::deque<Packet> queue;  // front is in service
    std::exponential_distribution<double> service;
    std::mt19937_64 rng;
    std::uint64_t next_ticket = 0;
    std::uint64_t next_completion_ticket = 0;
};

struct Reservoir {
    std::vector<double> samples;
    std::uint64_t seen = 0;
    std::uint64_t cap = 0;
    std::mt19937_64 rng;

    void offer(double x) {
        ++seen;
        if (samples.size() < cap) {
            samples.push_back(x);
            return;
        }
        std::uniform_int_distribution<std::uint64_t> pick(0, seen - 1);
        const std::uint64_t j = pick(rng);
        if (j < cap) samples[j] = x;
    }
};

struct ClassTally {
    double sum = 0.0;
    std::uint64_t count = 0;
    std::uint64_t controller_visits = 0;
};

struct ReplicationOutput {
    std::vector<ClassTally> classes;
    ClassTally total;
    Reservoir reservoir;
    int max_controller_visits = 0;
};

class Replication {
public:
    Replication(const ChainModel& chain, const SimConfig& cfg, std::uint32_t index)
        : cfg_(cfg), nodes_(static_cast<std::uint32_t>(chain.nodes.size())) {
        for (std::uint32_t i = 0; i < nodes_; ++i) {
            const NodeParams& n = chain.nodes[i];
            arrival_rng_.push_back(make_stream(cfg.seed, index, Stream::Arrivals, i));
            marking_rng_.push_back(make_stream(cfg.seed, index, Stream::FlowMarking, i));
            interarrival_.emplace_back(n.lambda);
            marking_.emplace_back(n.q_nf);
            stations_.push_back(Station{{}, std::exponential_distribution<double>(n.mu_switch),
                                        make_stream(cfg.seed, index, Stream::SwitchService, i)});
        }
        stations_.push_back(Station{{}, std::exponential_distribution<double>(chain.controller.mu_controller),
                                    make_stream(cfg.seed, index, Stream::ControllerService, 0)});
        out_.classes.resize(nodes_);
        out_.reservoir.cap = cfg.sample_cap;
        out_.reservoir.rng = make_stream(cfg.seed, index, Stream::Reservoir, 0);
        warmup_ = static_cast<std::uint64_t>(std::floor(cfg.warmup_fraction * static_cast<double>(cfg.packets_per_replication)));
    }

    ReplicationOutput run() {
        for (std::uint32_t i = 0; i < nodes_; ++i) schedule_arrival(i);
        while (departed_ < cfg_.packets_per_replication) {
            const Event ev = events_.top();
            events_.pop();
            now_ = ev.time;
            if (ev.arrival)
                on_arrival(ev.station);
            else
                on_completion(ev.station);
            check_conservation();
        }
        return std::move(out_);
    }

private:
    void schedule(double time, std::uint32_t station, bool arrival) {
        events_.push(Event{time, next_seq_++, station, arrival});
    }

    void schedule_arrival(std::uint32_t cls) {
        schedule(now_ + interarrival_[cls](arrival_rng_[cls]), cls, true);
    }

    void enqueue(std::uint32_t s, Packet p) {
        Station& st = stations_[s];
        p.ticket = st.next_ticket++;
        st.queue.push_back(p);
        ++in_queues_;
        if (st.queue.size() == 1) schedule(now_ + st.service(st.rng), s, false);
    }

    void on_arrival(std::uint32_t cls) {
        Packet p;
        p.arrival_time = now_;
        p.entry_node = cls;
        p.new_flow = marking_[cls](marking_rng_[cls]);
        ++arrived_;
        enqueue(cls, p);
        schedule_arrival(cls);
    }

    void on_completion(std::uint32_t s) {
        Station& st = stations_[s];
        Packet p = st.queue.front();
        st.queue.pop_front();
        --in_queues_;
        if (p.ticket != st.next_completion_ticket++)
            throw std::logic_error("FIFO order violated at station " + std::to_string(s));
        if (!st.queue.empty()) schedule(now_ + st.service(st.rng), s, false);

        if (s == nodes_) {
            enqueue(p.entry_node, p);
        } else if (s == p.entry_node && p.new_flow && p.controller_visits == 0) {
            ++p.controller_visits;
            enqueue(nodes_, p);
        } else if (s + 1 < nodes_) {
            enqueue(s + 1, p);
        } else {
            depart(p);
        }
    }

    void depart(const Packet& p) {
        if (p.controller_visits > 1 || p.controller_visits != (p.new_flow ? 1 : 0))
            throw std::logic_error("packet visited the controller " + std::to_string(p.controller_visits) + " times");
        out_.max_controller_visits = std::max<int>(out_.max_controller_visits, p.controller_visits);
        ++departed_;
        if (departed_ <= warmup_) return;
        const double sojourn = now_ - p.arrival_time;
        for (ClassTally* t : {&out_.classes[p.entry_node], &out_.total}) {
            t->sum += sojourn;
            ++t->count;
            t->controller_visits += p.controller_visits;
        }
        out_.reservoir.offer(sojourn);
    }

    void check_conservation() const {
        if (arrived_ != departed_ + in_queues_) throw std::logic_error("packet conservation violated");
        std::uint64_t queued = 0;
        for (const auto& st : stations_) queued += st.queue.size();
        if (queued != in_queues_) throw std::logic_error("station occupancy out of sync");
    }

    const SimConfig& cfg_;
    std::uint32_t nodes_;
    std::vector<std::mt19937_64> arrival_rng_;
    std::vector<std::mt19937_64> marking_rng_;
    std::vector<std::exponential_distribution<double>> interarrival_;
    std::vector<std::bernoulli_distribution> marking_;
    std::vector<Station> stations_;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;

    double now_ = 0.0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t arrived_ = 0;
    std::uint64_t departed_ = 0;
    std::uint64_t in_queues_ = 0;
    std::uint64_t warmup_ = 0;
    ReplicationOutput out_;
};

// Uniform sample of size cap from the union of per-replication reservoirs:
// draws without replacement, picking the source in proportion to how many
// of its original samples remain.
std::vector<double> merge_reservoirs(std::vector<ReplicationOutput>& reps, std::uint64_t cap, std::uint64_t seed) {
    std::uint64_t total = 0;
    for (const auto& r : reps) total += r.reservoir.seen;
    std::vector<double> merged;
    if (total <= cap) {
        merged.reserve(total);
        for (const auto& r : reps) merged.insert(merged.end(), r.reservoir.samples.begin(), r.reservoir.samples.end());
        return merged;
    }
    auto rng = make_stream(seed, 0, Stream::Merge, 0);
    std::vector<std::uint64_t> remaining;
    std::vector<std::size_t> cursor(reps.size(), 0);
    for (auto& r : reps) {
        std::shuffle(r.reservoir.samples.begin(), r.reservoir.samples.end(), rng);
        remaining.push_back(r.reservoir.seen);
    }
    merged.reserve(cap);
    std::uint64_t left = total;
    for (std::uint64_t k = 0; k < cap; ++k) {
        std::uniform_int_distribution<std::uint64_t> pick(0, left - 1);
        std::uint64_t u = pick(rng);
        std::size_t src = 0;
        while (u >= remaining[src]) u -= remaining[src++];
        merged.push_back(reps[src].reservoir.samples[cursor[src]++]);
        --remaining[src];
        --left;
    }
    return merged;
}

ClassStatistics summarize(const std::vector<ClassTally>& per_rep) {
    ClassStatistics s;
    std::uint64_t visits = 0;
    for (const auto& t : per_rep) {
        s.per_replication_means.push_back(t.count > 0 ? t.sum / static_cast<double>(t.count) : 0.0);
        s.packets += t.count;
        visits += t.controller_visits;
    }
    const ConfidenceInterval ci = normal_confidence_interval(s.per_replication_means);
    s.mean_sojourn = ci.mean;
    s.ci_halfwidth = ci.halfwidth;
    s.controller_visit_fraction = s.packets > 0 ? static_cast<double>(visits) / static_cast<double>(s.packets) : 0.0;
    return s;
}

} // namespace

void validate(const SimConfig& cfg) {
    if (cfg.packets_per_replication < 10000) throw DomainError("packets_per_replication must be at least 10000");
    if (cfg.replications < 2) throw DomainError("replications must be at least 2");
    if (!(cfg.warmup_fraction >= 0.0 && cfg.warmup_fraction < 0.5))
        throw DomainError("warmup_fraction must lie in [0, 0.5)");
    if (cfg.sample_cap == 0) throw DomainError("sample_cap must be positive");
}

ConfidenceInterval normal_confidence_interval(const std::vector<double>& replication_means) {
    ConfidenceInterval ci;
    const auto n = static_cast<double>(replication_means.size());
    if (replication_means.empty()) return ci;
    ci.mean = std::accumulate(replication_means.begin(), replication_means.end(), 0.0) / n;
    if (replication_means.size() < 2) return ci;
    double ss = 0.0;
    for (double m : replication_means) ss += (m - ci.mean) * (m - ci.mean);
    ci.halfwidth = kNormalQuantile95 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return ci;
}

SimResult run_chain(const ChainModel& chain, const SimConfig& cfg) {
    validate(chain);
    validate(cfg);

    std::vector<ReplicationOutput> reps(cfg.replications);
    if (cfg.parallel && cfg.replications > 1) {
        std::vector<std::future<ReplicationOutput>> jobs;
        for (std::uint32_t r = 0; r < cfg.replications; ++r)
            jobs.push_back(std::async(std::launch::async, [&chain, &cfg, r] { return Replication(chain, cfg, r).run(); }));
        for (std::uint32_t r = 0; r < cfg.replications; ++r) reps[r] = jobs[r].get();
    } else {
        for (std::uint32_t r = 0; r < cfg.replications; ++r) reps[r] = Replication(chain, cfg, r).run();
    }

    SimResult result;
    std::vector<ClassTally> totals;
    for (const auto& r : reps) {
        totals.push_back(r.total);
        result.max_controller_visits = std::max(result.max_controller_visits, r.max_controller_visits);
        result.samples_seen += r.reservoir.seen;
    }
    const ClassStatistics aggregate = summarize(totals);
    result.mean_sojourn = aggregate.mean_sojourn;
    result.ci_halfwidth = aggregate.ci_halfwidth;
    result.per_replication_means = aggregate.per_replication_means;
    result.controller_visit_fraction = aggregate.controller_visit_fraction;
    result.packets_counted = aggregate.packets;

    for (std::size_t c = 0; c < chain.nodes.size(); ++c) {
        std::vector<ClassTally> per_rep;
        for (const auto& r : reps) per_rep.push_back(r.classes[c]);
        result.classes.push_back(summarize(per_rep));
    }

    result.empirical_samples = merge_reservoirs(reps, cfg.sample_cap, cfg.seed);
    std::sort(result.empirical_samples.begin(), result.empirical_samples.end());
    return result;
}

SimResult run_single_node(const NodeParams& node, const ControllerParams& ctrl, const SimConfig& cfg) {
    return run_chain(ChainModel{{node}, ctrl}, cfg);
}

double empirical_ccdf(const SimResult& result, double t) {
    const auto& s = result.empirical_samples;
    if (s.empty()) return 0.0;
    const auto above = s.end() - std::upper_bound(s.begin(), s.end(), t);
    return static_cast<double>(above) / static_cast<double>(s.size());
}

} // namespace ofqn
