#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pws/grid.hpp"

namespace pws {

struct TrajectoryRecord {
  int dim = 1;
  std::vector<double> times;
  std::vector<Vec> positions;
  std::vector<Vec> velocities;
  std::vector<Vec> quantum_force;
  std::vector<Vec> em_force;
  std::vector<std::uint8_t> near_node;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  void push(double t, Vec z, Vec v, Vec fq, Vec fem, bool node_flag) {
    times.push_back(t);
    positions.push_back(z);
    velocities.push_back(v);
    quantum_force.push_back(fq);
    em_force.push_back(fem);
    near_node.push_back(node_flag ? 1 : 0);
  }
};

class TrajectoryError : public Error {
 public:
  enum class Kind { node_encounter, boundary_exit, tachyonic_region, past_oriented_current };

  TrajectoryError(Kind kind, double last_time, TrajectoryRecord partial, const std::string& detail = {})
      : Error(std::string(kind_name(kind)) + " at t=" + std::to_string(last_time) +
              (detail.empty() ? "" : ": " + detail)),
        kind_(kind),
        last_time_(last_time),
        partial_(std::move(partial)) {}

  Kind kind() const noexcept { return kind_; }
  double last_time() const noexcept { return last_time_; }
  const TrajectoryRecord& partial() const noexcept { return partial_; }

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::node_encounter: return "node encounter";
      case Kind::boundary_exit: return "boundary exit";
      case Kind::tachyonic_region: return "tachyonic region";
      case Kind::past_oriented_current: return "past-oriented current";
    }
    return "trajectory error";
  }

 private:
  Kind kind_;
  double last_time_;
  TrajectoryRecord partial_;
};

// Second derivative of a sampled path by (possibly non-uniform) centred
// differences; entry i corresponds to times[i + 1].
std::vector<Vec> path_acceleration(const std::vector<double>& times, const std::vector<Vec>& positions);

}  // namespace pws
