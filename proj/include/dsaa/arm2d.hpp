// Planar three-joint arm pushing a ball. Joints move in 1-degree steps and
// clamp to [-90, 90]; the ball is quasi-static (no gravity, no momentum) and
// is displaced by minimal-translation resolution against the link capsules.
#pragma once

#include <array>

#include "dsaa/env.hpp"

namespace dsaa {

struct Point {
  double x = 0, y = 0;
};

struct Arm2dConfig {
  std::array<double, 3> link_lengths = {7.0, 7.0, 7.0};
  double ball_radius = 1.5;
  double link_width = 0.5;  // capsule thickness (diameter)
  double joint_step_deg = 1.0;
  double joint_limit_deg = 90.0;
  Point ball_start = {13.0, 13.0};
  double y_task = 11.0;  // reward when ball center drops below this height
  int max_steps = 5000;
};

// p0 = (0,0); p_i = p_{i-1} + l_i * (cos Theta_i, sin Theta_i) with
// Theta_i the cumulative angle in radians.
std::array<Point, 4> arm_forward_kinematics(const std::array<double, 3>& angles_deg,
                                            const std::array<double, 3>& links);

// Resolves ball-capsule penetration by translating the ball along the
// deepest penetration's minimal-translation vector; up to 8 passes.
// Returns the number of passes that still saw penetration after the loop
// (0 means fully resolved).
int resolve_ball_push(const std::array<Point, 4>& joints, const Arm2dConfig& cfg,
                      Point& ball);

class Arm2dWorld final : public Env {
 public:
  explicit Arm2dWorld(const Arm2dConfig& cfg = {});

  Vec reset() override;
  StepResult step(int action) override;
  int obs_dim() const override { return 5; }
  int n_actions() const override { return 6; }
  std::unique_ptr<Env> clone() const override;
  std::string name() const override { return "arm2d"; }

  const std::array<double, 3>& joint_angles() const { return angles_; }
  Point ball() const { return ball_; }
  std::array<Point, 4> joint_positions() const;
  double total_reach() const;
  int unresolved_contact_count() const { return unresolved_contacts_; }
  const Arm2dConfig& config() const { return cfg_; }

  Vec observe() const;

 private:
  Arm2dConfig cfg_;
  std::array<double, 3> angles_ = {0, 0, 0};
  Point ball_;
  int steps_ = 0;
  int unresolved_contacts_ = 0;
};

}  // namespace dsaa
