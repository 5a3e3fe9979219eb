// SPDX-License-Identifier: Apache-2.0
#include "cloudplan/vm_pool.hpp"

#include <algorithm>
#include <stdexcept>

namespace cloudplan {

std::string_view to_string(Tier tier) { return tier == Tier::reserved ? "reserved" : "on_demand"; }

VmPool::VmPool(const Catalog& catalog, std::vector<std::int64_t> contract, PoolSettings settings)
    : catalog_(&catalog), contract_(std::move(contract)), settings_(settings) {
  if (contract_.size() != catalog.size()) throw std::invalid_argument("VmPool: contract size does not match catalog");
  for (auto n : contract_) {
    if (n < 0) throw std::invalid_argument("VmPool: negative contract quantity");
  }
  if (settings_.launch_latency < 0) throw std::invalid_argument("VmPool: launch_latency must be >= 0");
  if (settings_.min_rental < 1) throw std::invalid_argument("VmPool: min_rental must be >= 1");
  if (settings_.billing_quantum < 1) throw std::invalid_argument("VmPool: billing_quantum must be >= 1");
}

std::int64_t VmPool::capacity_of() const {
  std::int64_t total = 0;
  for (const auto& vm : instances_) {
    if (vm.status == VmStatus::running) total += catalog_->type(vm.type).capacity;
  }
  return total;
}

std::int64_t VmPool::planned_capacity() const {
  std::int64_t total = 0;
  for (const auto& vm : instances_) total += catalog_->type(vm.type).capacity;
  return total;
}

std::int64_t VmPool::reserved_capacity() const {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < contract_.size(); ++i) total += contract_[i] * catalog_->type(i).capacity;
  return total;
}

std::int64_t VmPool::on_demand_capacity() const {
  std::int64_t total = 0;
  for (const auto& vm : instances_) {
    if (vm.tier == Tier::on_demand && vm.status == VmStatus::running) total += catalog_->type(vm.type).capacity;
  }
  return total;
}

std::int64_t VmPool::active_count(std::size_t type, Tier tier) const {
  return std::count_if(instances_.begin(), instances_.end(),
                       [&](const VmInstance& vm) { return vm.type == type && vm.tier == tier; });
}

std::int64_t VmPool::running_count(Tier tier) const {
  return std::count_if(instances_.begin(), instances_.end(),
                       [&](const VmInstance& vm) { return vm.tier == tier && vm.status == VmStatus::running; });
}

std::int64_t VmPool::idle_reserved(std::size_t type) const {
  return contract_.at(type) - active_count(type, Tier::reserved);
}

const VmInstance* VmPool::find(std::uint64_t id) const {
  auto it = std::find_if(instances_.begin(), instances_.end(), [&](const VmInstance& vm) { return vm.id == id; });
  return it == instances_.end() ? nullptr : &*it;
}

void VmPool::launch(const LaunchOrder& order, std::int64_t now) {
  if (order.type >= catalog_->size()) throw std::logic_error("VmPool::launch: unknown type");
  if (order.count < 0) throw std::logic_error("VmPool::launch: negative count");
  if (order.tier == Tier::reserved && order.count > idle_reserved(order.type)) {
    throw std::logic_error("VmPool::launch: reserved launch exceeds contract for type '" +
                           catalog_->type(order.type).id + "'");
  }
  const auto ready = now + std::max<std::int64_t>(settings_.launch_latency, 1);
  for (std::int64_t k = 0; k < order.count; ++k) {
    instances_.push_back(VmInstance{next_id_++, order.type, order.tier, VmStatus::launching, now, ready, ready});
  }
}

void VmPool::shut_down(std::uint64_t id) {
  auto it = std::find_if(instances_.begin(), instances_.end(), [&](const VmInstance& vm) { return vm.id == id; });
  if (it == instances_.end()) throw std::logic_error("VmPool::shut_down: unknown instance " + std::to_string(id));
  instances_.erase(it);
}

void VmPool::advance(std::int64_t t) {
  for (auto& vm : instances_) {
    if (vm.status == VmStatus::launching && vm.ready_at <= t) {
      vm.status = VmStatus::running;
      vm.running_since = vm.ready_at;
    }
  }
}

}  // namespace cloudplan
