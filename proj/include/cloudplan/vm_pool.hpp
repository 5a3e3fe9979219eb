// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "cloudplan/catalog.hpp"

namespace cloudplan {

enum class Tier { reserved, on_demand };
enum class VmStatus { launching, running };

std::string_view to_string(Tier tier);

struct VmInstance {
  std::uint64_t id = 0;
  std::size_t type = 0;
  Tier tier = Tier::reserved;
  VmStatus status = VmStatus::launching;
  std::int64_t launched_at = 0;    // decision epoch that requested it
  std::int64_t ready_at = 0;       // first interval it serves
  std::int64_t running_since = 0;  // valid once running

  // Intervals served up to and including `now`.
  std::int64_t intervals_run(std::int64_t now) const { return now - running_since + 1; }
  // Intervals left in the billing quantum already paid for, in [0, quantum).
  std::int64_t quantum_remaining(std::int64_t now, std::int64_t quantum) const {
    return (quantum - intervals_run(now) % quantum) % quantum;
  }
};

struct PoolSettings {
  // A VM requested at the decision epoch closing interval t serves from
  // interval t + max(launch_latency, 1) and is `launching` until then.
  std::int64_t launch_latency = 1;
  // Intervals a VM must serve before it may be shut down.
  std::int64_t min_rental = 12;
  std::int64_t billing_quantum = 12;
};

struct LaunchOrder {
  std::size_t type = 0;
  Tier tier = Tier::reserved;
  std::int64_t count = 0;

  friend bool operator==(const LaunchOrder&, const LaunchOrder&) = default;
};

// Launched VMs (I_c) against a reservation contract (I_r). The on-demand
// subset of the launched VMs is I_0.
class VmPool {
 public:
  // contract[i] = reserved instances of catalog type i.
  VmPool(const Catalog& catalog, std::vector<std::int64_t> contract, PoolSettings settings);

  const Catalog& catalog() const { return *catalog_; }
  const PoolSettings& settings() const { return settings_; }
  const std::vector<std::int64_t>& contract() const { return contract_; }
  const std::vector<VmInstance>& instances() const { return instances_; }

  // r_c: capacity of running instances; launching ones serve nothing yet.
  std::int64_t capacity_of() const;
  // Running plus launching capacity: what the pool will serve once live.
  std::int64_t planned_capacity() const;
  // r_r: capacity of the whole reservation contract.
  std::int64_t reserved_capacity() const;
  std::int64_t on_demand_capacity() const;

  // Running or launching instances of one type and tier.
  std::int64_t active_count(std::size_t type, Tier tier) const;
  std::int64_t running_count(Tier tier) const;
  // Contract instances of `type` not currently running or launching.
  std::int64_t idle_reserved(std::size_t type) const;

  const VmInstance* find(std::uint64_t id) const;

  // Requests VMs at decision epoch `now`. Throws std::logic_error if a
  // reserved launch would exceed the contract.
  void launch(const LaunchOrder& order, std::int64_t now);
  // Stops a VM after the current interval. Throws std::logic_error for an
  // unknown id.
  void shut_down(std::uint64_t id);
  // Moves VMs whose ready interval has come to running, for interval t.
  void advance(std::int64_t t);

 private:
  const Catalog* catalog_;
  std::vector<std::int64_t> contract_;
  PoolSettings settings_;
  std::vector<VmInstance> instances_;
  std::uint64_t next_id_ = 1;
};

// Free-function alias of VmPool::capacity_of.
inline std::int64_t capacity_of(const VmPool& pool) { return pool.capacity_of(); }

}  // namespace cloudplan
