#ifndef TRES_SELF_MODEL_HPP
#define TRES_SELF_MODEL_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "parallel.hpp"
#include "simulator.hpp"

namespace tres {

/// What the optimizers need from one self-model simulation.
struct SimOutcome {
    double performance = 0; // forward displacement, 0 if the model falls
    bool fallen = false;
    Descriptor descriptor;
};

/// A morphology used as an internal simulator, memoized per controller.
class SelfModel {
public:
    SelfModel(Morphology body, SimConfig sim = {}, int workers = default_workers())
        : _body(std::move(body)), _sim(sim), _workers(workers)
    {
    }

    const SimOutcome& evaluate(const Controller& c)
    {
        auto it = _cache.find(c.key());
        if (it != _cache.end())
            return it->second;
        return _cache.emplace(c.key(), run(c)).first->second;
    }

    /// Simulates the uncached controllers of the batch in parallel.
    std::vector<const SimOutcome*> evaluate_batch(const std::vector<Controller>& batch)
    {
        std::vector<const Controller*> todo;
        std::unordered_map<std::uint64_t, bool> queued;
        for (const auto& c : batch)
            if (!_cache.count(c.key()) && queued.emplace(c.key(), true).second)
                todo.push_back(&c);
        std::vector<SimOutcome> fresh(todo.size());
        parallel_for(todo.size(), [&](std::size_t i) { fresh[i] = run(*todo[i]); }, _workers);
        for (std::size_t i = 0; i < todo.size(); ++i)
            _cache.emplace(todo[i]->key(), std::move(fresh[i]));
        std::vector<const SimOutcome*> out;
        out.reserve(batch.size());
        for (const auto& c : batch)
            out.push_back(&_cache.at(c.key()));
        return out;
    }

    const Morphology& body() const { return _body; }
    const SimConfig& config() const { return _sim; }
    std::size_t simulations() const { return _cache.size(); }

private:
    SimOutcome run(const Controller& c) const
    {
        const Trajectory tr = simulate(_body, c, _sim);
        return {forward_displacement(tr), tr.fallen, contact_descriptor(tr)};
    }

    Morphology _body;
    SimConfig _sim;
    int _workers;
    std::unordered_map<std::uint64_t, SimOutcome> _cache;
};

} // namespace tres

#endif // TRES_SELF_MODEL_HPP
