#include "dsaa/arm2d.hpp"

#include <cmath>
#include <stdexcept>

namespace dsaa {

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

// Closest point on segment ab to p.
Point closest_on_segment(Point a, Point b, Point p) {
  const double abx = b.x - a.x, aby = b.y - a.y;
  const double len2 = abx * abx + aby * aby;
  if (len2 <= 0) return a;
  double t = ((p.x - a.x) * abx + (p.y - a.y) * aby) / len2;
  t = std::max(0.0, std::min(1.0, t));
  return {a.x + t * abx, a.y + t * aby};
}

}  // namespace

std::array<Point, 4> arm_forward_kinematics(const std::array<double, 3>& angles_deg,
                                            const std::array<double, 3>& links) {
  std::array<Point, 4> p;
  p[0] = {0, 0};
  double cumulative = 0;
  for (int i = 0; i < 3; ++i) {
    cumulative += angles_deg[i] * kDegToRad;
    p[i + 1] = {p[i].x + links[i] * std::cos(cumulative),
                p[i].y + links[i] * std::sin(cumulative)};
  }
  return p;
}

int resolve_ball_push(const std::array<Point, 4>& joints, const Arm2dConfig& cfg,
                      Point& ball) {
  constexpr double kTol = 1e-9;  // separation tolerance
  const double contact = cfg.ball_radius + cfg.link_width / 2.0;
  for (int pass = 0; pass < 8; ++pass) {
    double deepest = 0;
    Point push{0, 0};
    for (int link = 0; link < 3; ++link) {
      const Point cp = closest_on_segment(joints[link], joints[link + 1], ball);
      const double dx = ball.x - cp.x, dy = ball.y - cp.y;
      const double dist = std::sqrt(dx * dx + dy * dy);
      const double pen = contact - dist;
      if (pen > deepest) {
        deepest = pen;
        if (dist > 1e-12) {
          push = {dx / dist * pen, dy / dist * pen};
        } else {
          // center exactly on the segment line: push along the left normal
          const double lx = joints[link + 1].x - joints[link].x;
          const double ly = joints[link + 1].y - joints[link].y;
          const double n = std::sqrt(lx * lx + ly * ly);
          push = {-ly / n * pen, lx / n * pen};
        }
      }
    }
    if (deepest <= kTol) return 0;
    ball.x += push.x;
    ball.y += push.y;
  }
  for (int link = 0; link < 3; ++link) {
    const Point cp = closest_on_segment(joints[link], joints[link + 1], ball);
    const double dx = ball.x - cp.x, dy = ball.y - cp.y;
    if (std::sqrt(dx * dx + dy * dy) < contact - kTol) return 1;
  }
  return 0;
}

Arm2dWorld::Arm2dWorld(const Arm2dConfig& cfg) : cfg_(cfg), ball_(cfg.ball_start) {}

double Arm2dWorld::total_reach() const {
  return cfg_.link_lengths[0] + cfg_.link_lengths[1] + cfg_.link_lengths[2];
}

std::array<Point, 4> Arm2dWorld::joint_positions() const {
  return arm_forward_kinematics(angles_, cfg_.link_lengths);
}

Vec Arm2dWorld::observe() const {
  const double scale = total_reach();
  return {angles_[0] / cfg_.joint_limit_deg, angles_[1] / cfg_.joint_limit_deg,
          angles_[2] / cfg_.joint_limit_deg, ball_.x / scale, ball_.y / scale};
}

Vec Arm2dWorld::reset() {
  angles_ = {0, 0, 0};
  ball_ = cfg_.ball_start;
  steps_ = 0;
  return observe();
}

StepResult Arm2dWorld::step(int action) {
  if (action < 0 || action >= 6)
    throw std::invalid_argument("arm step: bad action");
  const int joint = action / 2;
  const double delta = (action % 2 == 0) ? cfg_.joint_step_deg : -cfg_.joint_step_deg;
  const double proposed = angles_[joint] + delta;
  if (proposed >= -cfg_.joint_limit_deg && proposed <= cfg_.joint_limit_deg) {
    angles_[joint] = proposed;
    unresolved_contacts_ += resolve_ball_push(joint_positions(), cfg_, ball_);
  }
  ++steps_;
  const bool rewarded = ball_.y < cfg_.y_task;
  const double reward = rewarded ? 1.0 : 0.0;
  const bool done = rewarded || steps_ >= cfg_.max_steps;
  return {observe(), reward, done};
}

std::unique_ptr<Env> Arm2dWorld::clone() const {
  return std::make_unique<Arm2dWorld>(*this);
}

}  // namespace dsaa
