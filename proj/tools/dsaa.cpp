// Command-line entry point: train, baseline, oracle-check, figs.
#include <CLI11.hpp>

#include <atomic>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "dsaa/arm2d.hpp"
#include "dsaa/driver.hpp"
#include "dsaa/eval.hpp"
#include "dsaa/render.hpp"

namespace fs = std::filesystem;
using namespace dsaa;

namespace {

// ---------------------------------------------------------------------------
// small helpers

std::vector<uint64_t> parse_u64_list(const std::string& csv) {
  std::vector<uint64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoull(item));
  if (out.empty()) throw std::invalid_argument("empty list: " + csv);
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  if (csv.empty() || csv == "none") return out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoi(item));
  return out;
}

struct Csv {
  FILE* f = nullptr;
  explicit Csv(const fs::path& path) : f(std::fopen(path.c_str(), "wb")) {
    if (!f) throw std::runtime_error("cannot open " + path.string());
  }
  ~Csv() {
    if (f) std::fclose(f);
  }
  Csv(const Csv&) = delete;
  Csv& operator=(const Csv&) = delete;
  void row(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
    va_list args;
    va_start(args, fmt);
    std::vfprintf(f, fmt, args);
    va_end(args);
  }
};

std::map<std::string, std::string> read_ini(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing input: " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

fs::path resolve_out(const std::string& out) {
  fs::path p(out);
  if (p.is_relative()) {
    const char* root = std::getenv("DSAA_OUT_ROOT");
    if (root && *root) p = fs::path(root) / p;
  }
  return p;
}

bool is_grid_env(const std::string& env) { return env != "arm2d"; }

std::unique_ptr<Env> make_env(const std::string& env, double y_task,
                              int noise_dims, uint64_t seed) {
  std::unique_ptr<Env> base;
  if (env == "four_rooms") {
    base = std::make_unique<GridWorld>(four_rooms_map());
  } else if (env == "two_rooms") {
    base = std::make_unique<GridWorld>(two_rooms_map());
  } else if (env == "arm2d") {
    Arm2dConfig cfg;
    cfg.y_task = y_task;
    base = std::make_unique<Arm2dWorld>(cfg);
  } else if (env.size() > 4 && env.substr(env.size() - 4) == ".map") {
    base = std::make_unique<GridWorld>(GridWorld::from_file(env));
  } else {
    throw std::invalid_argument("unknown env: " + env);
  }
  if (noise_dims > 0)
    base = std::make_unique<NoiseWrapper>(std::move(base), noise_dims,
                                          derive_seed(seed, 40));
  return base;
}

std::unique_ptr<GridWorld> make_grid(const std::string& env) {
  if (env == "four_rooms") return std::make_unique<GridWorld>(four_rooms_map());
  if (env == "two_rooms") return std::make_unique<GridWorld>(two_rooms_map());
  if (env.size() > 4 && env.substr(env.size() - 4) == ".map")
    return std::make_unique<GridWorld>(GridWorld::from_file(env));
  return nullptr;
}

// ---------------------------------------------------------------------------
// shared experiment options

struct ExperimentSpec {
  std::string env;
  std::string mode = "auto";  // auto | unsupervised | online
  std::string task = "easy";
  int n_abstract = 0;  // 0 = env default
  std::string seeds = "1";
  int jobs = 1;
  std::string out = "out/run";
  long e_iters = 0;     // 0 = env default
  int episode_cap = 0;  // 0 = env default
  int phases = 10;
  long max_total_steps = 3000000;
  int noise_dims = 0;
  // ablation switches
  std::string gumbel_mode = "gumbel";
  double tau = 0.5;
  double beta_h = 1.0;
  double beta_sr = 1.0;
  std::string entropy_scope = "batch_marginal";
  // training knobs
  double gamma = 0.95;
  int sgd_steps = 2000;
  int batch = 512;
  int update_every = 1;
  double lr = 1e-3;
  double alpha = 1.0;
  double reward_scale = 200.0;
  int target_delay = 20;
  long replay_cap = 100000;
  std::string encoder_hidden = "128,256";
  std::string decoder_hidden = "64,128";
  std::string option_hidden = "64,128,256,512";
  bool reset_options = false;
  bool log_steps = false;
  bool dump_replay = false;

  void resolve() {
    const bool grid = is_grid_env(env);
    if (mode == "auto") mode = grid ? "unsupervised" : "online";
    if (n_abstract == 0) n_abstract = grid ? 4 : 8;
    if (e_iters == 0) e_iters = grid ? 20000 : 100000;
    if (episode_cap == 0) episode_cap = grid ? 100 : 5000;
    if (mode != "unsupervised" && mode != "online")
      throw std::invalid_argument("mode must be unsupervised or online");
    if (gumbel_mode != "gumbel" && gumbel_mode != "softmax")
      throw std::invalid_argument("gumbel-mode must be gumbel or softmax");
    if (entropy_scope != "batch_marginal" && entropy_scope != "per_sample")
      throw std::invalid_argument(
          "entropy-scope must be batch_marginal or per_sample");
    if (task != "easy" && task != "hard")
      throw std::invalid_argument("task must be easy or hard");
  }

  double y_task() const { return task == "easy" ? 11.0 : 9.0; }

  RunConfig run_config(uint64_t seed) const {
    RunConfig rc;
    rc.mode = mode == "online" ? RunMode::kOnline : RunMode::kUnsupervised;
    rc.n_abstract = n_abstract;
    rc.e_iters = e_iters;
    rc.episode_cap = episode_cap;
    rc.outer_iters = phases;
    rc.max_total_steps = max_total_steps;
    rc.abstraction.gamma = gamma;
    rc.abstraction.beta_h = beta_h;
    rc.abstraction.beta_sr = beta_sr;
    rc.abstraction.gumbel.tau = tau;
    rc.abstraction.gumbel.mode = gumbel_mode == "softmax"
                                     ? GumbelMode::kPlainSoftmax
                                     : GumbelMode::kGumbelSoft;
    rc.abstraction.entropy_scope = entropy_scope == "per_sample"
                                       ? EntropyScope::kPerSample
                                       : EntropyScope::kBatchMarginal;
    rc.abstraction.sgd_steps = sgd_steps;
    rc.abstraction.batch_size = batch;
    rc.abstraction.lr = lr;
    rc.encoder_hidden = parse_int_list(encoder_hidden);
    rc.decoder_hidden = parse_int_list(decoder_hidden);
    rc.options.hidden = parse_int_list(option_hidden);
    rc.options.alpha = alpha;
    rc.options.gamma = gamma;
    rc.options.reward_scale = reward_scale;
    rc.options.target_delay = target_delay;
    rc.options.lr = lr;
    rc.replay_capacity = replay_cap;
    rc.option_batch = batch;
    rc.option_update_every = update_every;
    rc.reset_options = reset_options;
    rc.seed = seed;
    return rc;
  }

  void write_config(const fs::path& path, uint64_t seed) const {
    Csv f(path);
    f.row("env=%s\n", env.c_str());
    f.row("mode=%s\n", mode.c_str());
    f.row("task=%s\n", task.c_str());
    f.row("n=%d\n", n_abstract);
    f.row("seed=%llu\n", static_cast<unsigned long long>(seed));
    f.row("out=%s\n", out.c_str());
    f.row("e-iters=%ld\n", e_iters);
    f.row("ep-cap=%d\n", episode_cap);
    f.row("phases=%d\n", phases);
    f.row("max-steps=%ld\n", max_total_steps);
    f.row("noise-dims=%d\n", noise_dims);
    f.row("gumbel-mode=%s\n", gumbel_mode.c_str());
    f.row("tau=%.17g\n", tau);
    f.row("beta-h=%.17g\n", beta_h);
    f.row("beta-sr=%.17g\n", beta_sr);
    f.row("entropy-scope=%s\n", entropy_scope.c_str());
    f.row("gamma=%.17g\n", gamma);
    f.row("sgd-steps=%d\n", sgd_steps);
    f.row("batch=%d\n", batch);
    f.row("update-every=%d\n", update_every);
    f.row("lr=%.17g\n", lr);
    f.row("alpha=%.17g\n", alpha);
    f.row("reward-scale=%.17g\n", reward_scale);
    f.row("target-delay=%d\n", target_delay);
    f.row("replay-cap=%ld\n", replay_cap);
    f.row("encoder-hidden=%s\n", encoder_hidden.c_str());
    f.row("decoder-hidden=%s\n", decoder_hidden.c_str());
    f.row("option-hidden=%s\n", option_hidden.c_str());
    f.row("reset-options=%s\n", reset_options ? "true" : "false");
    f.row("log-steps=%s\n", log_steps ? "true" : "false");
    f.row("dump-replay=%s\n", dump_replay ? "true" : "false");
  }
};

void add_experiment_options(CLI::App* cmd, ExperimentSpec& spec) {
  // later occurrences win, so explicit flags override --config values
  cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--env", spec.env,
                  "four_rooms | two_rooms | arm2d | path to a .map file")
      ->required();
  cmd->add_option("--mode", spec.mode, "auto | unsupervised | online");
  cmd->add_option("--task", spec.task, "arm2d task: easy (y=11) | hard (y=9)");
  cmd->add_option("--n", spec.n_abstract, "abstract states (0 = env default)");
  cmd->add_option("--seed", spec.seeds, "comma-separated seed list");
  cmd->add_option("--jobs", spec.jobs, "parallel seed workers");
  cmd->add_option("--out", spec.out, "output directory");
  cmd->add_option("--e-iters", spec.e_iters, "exploration steps per phase");
  cmd->add_option("--ep-cap", spec.episode_cap, "episode step cap");
  cmd->add_option("--phases", spec.phases, "outer iterations (unsupervised)");
  cmd->add_option("--max-steps", spec.max_total_steps, "online hard step cap");
  cmd->add_option("--noise-dims", spec.noise_dims, "appended U(0,1) dims");
  cmd->add_option("--gumbel-mode", spec.gumbel_mode, "gumbel | softmax");
  cmd->add_option("--tau", spec.tau, "Gumbel-Softmax temperature");
  cmd->add_option("--beta-h", spec.beta_h, "entropy loss weight");
  cmd->add_option("--beta-sr", spec.beta_sr, "SR loss weight");
  cmd->add_option("--entropy-scope", spec.entropy_scope,
                  "batch_marginal | per_sample");
  cmd->add_option("--gamma", spec.gamma, "discount factor");
  cmd->add_option("--sgd-steps", spec.sgd_steps,
                  "abstraction SGD steps per phase");
  cmd->add_option("--batch", spec.batch, "batch size");
  cmd->add_option("--update-every", spec.update_every,
                  "env steps per option update");
  cmd->add_option("--lr", spec.lr, "Adam learning rate");
  cmd->add_option("--alpha", spec.alpha, "soft-Q temperature");
  cmd->add_option("--reward-scale", spec.reward_scale, "option goal reward R");
  cmd->add_option("--target-delay", spec.target_delay, "target sync period");
  cmd->add_option("--replay-cap", spec.replay_cap, "replay buffer capacity");
  cmd->add_option("--encoder-hidden", spec.encoder_hidden, "encoder hidden sizes");
  cmd->add_option("--decoder-hidden", spec.decoder_hidden, "decoder hidden sizes");
  cmd->add_option("--option-hidden", spec.option_hidden,
                  "option trunk hidden sizes");
  cmd->add_flag("--reset-options", spec.reset_options,
                "retrain options from scratch each phase");
  cmd->add_flag("--log-steps", spec.log_steps,
                "stream per-step records to steps.csv");
  cmd->add_flag("--dump-replay", spec.dump_replay,
                "dump the final-phase replay buffer");
}

// ---------------------------------------------------------------------------
// output writers

void write_run_csvs(const fs::path& dir, const RunStats& st, int n_state_ids) {
  {
    Csv f(dir / "metrics.csv");
    f.row(
        "phase,steps,edges_discovered,episodes_completed,mean_option_loss,"
        "abstraction_loss_first,abstraction_loss_last,env_return_sum,"
        "unique_states\n");
    for (const auto& p : st.phases)
      f.row("%d,%ld,%d,%ld,%.17g,%.17g,%.17g,%.17g,%ld\n", p.phase, p.steps,
            p.edges_discovered, p.episodes_completed, p.mean_option_loss,
            p.abstraction_loss_first, p.abstraction_loss_last, p.env_return_sum,
            p.unique_states);
  }
  {
    Csv f(dir / "episodes.csv");
    f.row("episode,start_step,length,env_return\n");
    for (const auto& e : st.episodes)
      f.row("%ld,%ld,%ld,%.17g\n", e.episode, e.start_step, e.length,
            e.env_return);
  }
  {
    Csv f(dir / "coverage.csv");
    f.row("step,unique_states,fraction\n");
    for (const auto& c : st.coverage)
      f.row("%ld,%ld,%.17g\n", c.step, c.unique_states,
            n_state_ids > 0
                ? static_cast<double>(c.unique_states) / n_state_ids
                : 0.0);
  }
}

void write_occupancy_csv(const fs::path& path, const GridWorld& grid,
                         const std::vector<uint64_t>& counts) {
  Csv f(path);
  f.row("state_id,row,col,count\n");
  for (size_t i = 0; i < counts.size(); ++i) {
    const auto [r, c] = grid.open_cells()[i];
    f.row("%zu,%d,%d,%llu\n", i, r, c, static_cast<unsigned long long>(counts[i]));
  }
}

std::vector<int> grid_assignment(const Encoder& enc, const GridWorld& grid,
                                 int noise_dims) {
  std::vector<int> assignment;
  assignment.reserve(grid.open_cells().size());
  for (const auto& [r, c] : grid.open_cells()) {
    Vec obs = grid.observe_cell(r, c);
    obs.resize(obs.size() + noise_dims, 0.5);  // fixed mid-range noise probe
    assignment.push_back(encode_hard(enc, obs));
  }
  return assignment;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << text;
}

void write_train_outputs(const fs::path& dir, const ExperimentSpec& spec,
                         uint64_t seed, const DsaaResult& res) {
  const std::unique_ptr<GridWorld> grid = make_grid(spec.env);
  write_run_csvs(dir, res.stats,
                 grid ? static_cast<int>(grid->open_cells().size()) : -1);
  write_text(dir / "graph.dot", res.graph.to_dot());
  write_text(dir / "graph.json", res.graph.to_json());

  if (grid) {
    write_occupancy_csv(dir / "occupancy.csv", *grid, res.stats.visit_counts);
    const std::vector<int> assignment =
        grid_assignment(res.encoder, *grid, spec.noise_dims);
    render_abstraction_pgm(dir / "abstraction.pgm", *grid, assignment,
                           spec.n_abstract, 16);
    render_abstraction_svg(dir / "abstraction.svg", *grid, assignment,
                           spec.n_abstract, 16);
    std::vector<Vec> probes;
    for (const auto& [r, c] : grid->open_cells()) {
      Vec obs = grid->observe_cell(r, c);
      obs.resize(obs.size() + spec.noise_dims, 0.5);
      probes.push_back(std::move(obs));
    }
    dump_abstraction_csv(res.encoder, probes, (dir / "abstraction.csv").string());

    const RoomLabels rooms = room_labels(*grid);
    const PurityResult purity = room_purity(assignment, rooms, spec.n_abstract);
    double consistency = -1;
    if (spec.noise_dims > 0) {
      Rng rng(derive_seed(seed, 50));
      consistency =
          noise_consistency(res.encoder, *grid, spec.noise_dims, 16, rng);
    }
    Csv f(dir / "quality.csv");
    f.row("purity,empty_preimages,occupancy_entropy,noise_consistency\n");
    f.row("%.17g,%d,%.17g,%.17g\n", purity.purity, purity.empty_preimages,
          occupancy_entropy(res.stats.visit_counts), consistency);
  } else {
    // arm2d: color a theta1 x theta2 slice of the observation space
    const int cells = 64;
    Matrix slice(cells, cells);
    std::vector<Vec> probes;
    for (int i = 0; i < cells; ++i)
      for (int j = 0; j < cells; ++j) {
        const double t1 = -1.0 + 2.0 * i / (cells - 1);
        const double t2 = -1.0 + 2.0 * j / (cells - 1);
        Vec obs = {t1, t2, 0.0, 13.0 / 21.0, 13.0 / 21.0};
        obs.resize(obs.size() + spec.noise_dims, 0.5);
        slice.at(i, j) = encode_hard(res.encoder, obs);
        probes.push_back(std::move(obs));
      }
    render_slice_svg(dir / "abstraction_slice.svg", slice, spec.n_abstract, 6);
    dump_abstraction_csv(res.encoder, probes, (dir / "abstraction.csv").string());
  }
}

// ---------------------------------------------------------------------------
// subcommands

void for_each_seed(const std::vector<uint64_t>& seeds, int jobs,
                   const std::function<void(uint64_t)>& work) {
  if (jobs <= 1) {
    for (uint64_t s : seeds) work(s);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::string> errors;
  std::mutex err_mutex;
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= seeds.size()) return;
      try {
        work(seeds[i]);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mutex);
        errors.emplace_back(e.what());
      }
    }
  };
  std::vector<std::thread> pool;
  const int n = std::min<int>(jobs, static_cast<int>(seeds.size()));
  pool.reserve(n);
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (!errors.empty()) throw std::runtime_error(errors.front());
}

int cmd_train(ExperimentSpec spec) {
  spec.resolve();
  const fs::path out = resolve_out(spec.out);
  fs::create_directories(out);
  const std::vector<uint64_t> seeds = parse_u64_list(spec.seeds);
  for_each_seed(seeds, spec.jobs, [&](uint64_t seed) {
    const fs::path dir = out / ("seed_" + std::to_string(seed));
    fs::create_directories(dir);
    RunConfig rc = spec.run_config(seed);
    rc.checkpoint_path = (dir / "checkpoint.bin").string();
    if (spec.dump_replay) rc.dump_replay_path = (dir / "replay.bin").string();
    auto env = make_env(spec.env, spec.y_task(), spec.noise_dims, seed);

    std::unique_ptr<Csv> steps;
    StepCallback on_step;
    if (spec.log_steps) {
      steps = std::make_unique<Csv>(dir / "steps.csv");
      steps->row(
          "step,phase,episode,state_id,abstract_state,goal,action,"
          "option_reward,env_reward,done\n");
      Csv* raw = steps.get();
      on_step = [raw](const StepRecord& r) {
        raw->row("%ld,%d,%ld,%d,%d,%d,%d,%.17g,%.17g,%d\n", r.step, r.phase,
                 r.episode, r.state_id, r.s, r.goal, r.action, r.option_reward,
                 r.env_reward, r.done ? 1 : 0);
      };
    }
    const DsaaResult res = run_dsaa(rc, *env, on_step);
    steps.reset();
    write_train_outputs(dir, spec, seed, res);
    spec.write_config(dir / "config.ini", seed);
    std::printf("seed %llu: %ld steps, %zu phases%s\n",
                static_cast<unsigned long long>(seed), res.stats.total_steps,
                res.stats.phases.size(),
                res.stats.online_converged ? ", converged" : "");
  });
  return 0;
}

int cmd_baseline(ExperimentSpec spec, const std::string& kind, long steps) {
  spec.resolve();
  if (steps <= 0) throw std::invalid_argument("--steps must be positive");
  if (steps < spec.episode_cap)
    throw std::invalid_argument("budget mismatch: --steps is below the episode cap");
  const fs::path out = resolve_out(spec.out);
  fs::create_directories(out);
  const std::vector<uint64_t> seeds = parse_u64_list(spec.seeds);
  for_each_seed(seeds, spec.jobs, [&](uint64_t seed) {
    const fs::path dir = out / ("seed_" + std::to_string(seed));
    fs::create_directories(dir);
    auto env = make_env(spec.env, spec.y_task(), spec.noise_dims, seed);
    BaselineStats st;
    if (kind == "uniform") {
      st = baseline_uniform_walk(*env, steps, spec.episode_cap, seed);
    } else if (kind == "softq") {
      FlatSoftQConfig cfg;
      cfg.bank.hidden = parse_int_list(spec.option_hidden);
      cfg.bank.alpha = spec.alpha;
      cfg.bank.gamma = spec.gamma;
      cfg.bank.target_delay = spec.target_delay;
      cfg.bank.lr = spec.lr;
      cfg.batch = spec.batch;
      cfg.update_every = spec.update_every;
      cfg.replay_capacity = spec.replay_cap;
      cfg.max_steps = steps;
      cfg.episode_cap = spec.episode_cap;
      st = baseline_flat_softq(*env, cfg, seed);
    } else {
      throw std::invalid_argument("unknown baseline kind: " + kind);
    }
    write_run_csvs(dir, st.stats, env->n_state_ids());
    if (const auto grid = make_grid(spec.env))
      write_occupancy_csv(dir / "occupancy.csv", *grid, st.stats.visit_counts);
    spec.write_config(dir / "config.ini", seed);
    std::printf("seed %llu: %ld steps, %zu episodes\n",
                static_cast<unsigned long long>(seed), st.stats.total_steps,
                st.stats.episodes.size());
  });
  return 0;
}

int cmd_oracle_check(uint64_t seed) {
  const auto results = run_oracle_checks(seed);
  bool all_pass = true;
  std::printf("%-34s %-6s %-12s %s\n", "suite", "status", "residual", "detail");
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    std::printf("%-34s %-6s %-12.3g %s\n", r.name.c_str(),
                r.pass ? "pass" : "FAIL", r.residual, r.detail.c_str());
  }
  return all_pass ? 0 : 1;
}

void fig1_outputs(const fs::path& out) {
  GridWorld grid(two_rooms_map());
  const TabularMdp mdp = grid_uniform_mdp(grid, 0.95);
  const Matrix psi = oracle_sr(mdp);
  const std::vector<std::pair<int, int>> refs = {{4, 4}, {4, 9}, {4, 14}};
  std::vector<Vec> maps;
  for (const auto& [r, c] : refs) {
    const Vec dist = sr_distance_map(mdp, psi, grid.cell_index(r, c));
    char name[64];
    std::snprintf(name, sizeof(name), "sr_distance_r%d_c%d.pgm", r, c);
    render_heatmap_pgm(out / name, grid, dist, 16);
    maps.push_back(dist);
  }
  Csv f(out / "sr_distance.csv");
  f.row("row,col,dist_left,dist_hallway,dist_right\n");
  for (size_t i = 0; i < grid.open_cells().size(); ++i) {
    const auto [r, c] = grid.open_cells()[i];
    f.row("%d,%d,%.17g,%.17g,%.17g\n", r, c, maps[0][i], maps[1][i], maps[2][i]);
  }
}

void require_file(const fs::path& p) {
  if (!fs::exists(p)) throw std::runtime_error("missing input: " + p.string());
}

void copy_file_to(const fs::path& from, const fs::path& to) {
  require_file(from);
  fs::copy_file(from, to, fs::copy_options::overwrite_existing);
}

int cmd_figs(const std::string& run_dir, const std::string& baseline_dir,
             bool fig1, const std::string& out_str) {
  const fs::path out = resolve_out(out_str);
  fs::create_directories(out);
  if (fig1) fig1_outputs(out);
  if (!run_dir.empty()) {
    const fs::path run(run_dir);
    require_file(run / "config.ini");
    const auto cfg = read_ini(run / "config.ini");
    const std::string env_name = cfg.at("env");
    const int n = std::stoi(cfg.at("n"));
    const int noise_dims = std::stoi(cfg.at("noise-dims"));
    const auto enc_hidden = parse_int_list(cfg.at("encoder-hidden"));
    const auto dec_hidden = parse_int_list(cfg.at("decoder-hidden"));
    const auto opt_hidden = parse_int_list(cfg.at("option-hidden"));
    require_file(run / "checkpoint.bin");

    auto env = make_env(env_name, 11.0, noise_dims, 1);
    Rng rng(1);
    Encoder enc(env->obs_dim(), n, rng, enc_hidden, {});
    SrDecoder dec(n, rng, dec_hidden);
    OptionBankConfig bank_cfg;
    bank_cfg.hidden = opt_hidden;
    OptionBank bank(env->obs_dim(), n, env->n_actions(), bank_cfg, rng);
    load_dsaa_checkpoint((run / "checkpoint.bin").string(), enc, dec, bank);

    if (const auto grid = make_grid(env_name)) {
      const auto assignment = grid_assignment(enc, *grid, noise_dims);
      render_abstraction_pgm(out / "abstraction.pgm", *grid, assignment, n, 16);
      render_abstraction_svg(out / "abstraction.svg", *grid, assignment, n, 16);
    }
    copy_file_to(run / "graph.dot", out / "graph.dot");
    copy_file_to(run / "episodes.csv", out / "returns_dsaa.csv");
    copy_file_to(run / "coverage.csv", out / "coverage_dsaa.csv");

    if (!baseline_dir.empty()) {
      const fs::path base(baseline_dir);
      copy_file_to(base / "episodes.csv", out / "returns_baseline.csv");
      copy_file_to(base / "coverage.csv", out / "coverage_baseline.csv");
      const fs::path run_occ = run / "occupancy.csv";
      const fs::path base_occ = base / "occupancy.csv";
      if (fs::exists(run_occ) && fs::exists(base_occ)) {
        auto load_counts = [](const fs::path& p) {
          std::ifstream in(p);
          std::string line;
          std::getline(in, line);  // header
          std::vector<uint64_t> counts;
          while (std::getline(in, line)) {
            const auto last = line.rfind(',');
            counts.push_back(std::stoull(line.substr(last + 1)));
          }
          return counts;
        };
        Csv f(out / "entropy_compare.csv");
        f.row("source,occupancy_entropy\n");
        f.row("dsaa,%.17g\n", occupancy_entropy(load_counts(run_occ)));
        f.row("baseline,%.17g\n", occupancy_entropy(load_counts(base_occ)));
      }
    }
  }
  return 0;
}

// Expands "--config FILE" into the file's key=value pairs as --key=value
// tokens at the same position, so flags given after it still win.
std::vector<std::string> expand_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  for (size_t i = 1; i < args.size(); ++i) {
    std::string file;
    size_t span = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      file = args[i + 1];
      span = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
      span = 1;
    }
    if (span == 0) continue;
    const auto kv = read_ini(file);
    std::vector<std::string> injected;
    injected.reserve(kv.size());
    for (const auto& [k, v] : kv) injected.push_back("--" + k + "=" + v);
    args.erase(args.begin() + i, args.begin() + i + span);
    args.insert(args.begin() + i, injected.begin(), injected.end());
    break;
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dsaa: discrete state-action abstraction for sparse-reward RL"};
  app.require_subcommand(1);

  ExperimentSpec train_spec;
  CLI::App* train = app.add_subcommand(
      "train", "run the full explore/abstract loop and write metrics");
  add_experiment_options(train, train_spec);

  ExperimentSpec base_spec;
  std::string baseline_kind = "uniform";
  long baseline_steps = 100000;
  CLI::App* baseline = app.add_subcommand(
      "baseline", "uniform random walk or flat soft-Q on the raw environment");
  add_experiment_options(baseline, base_spec);
  baseline->add_option("--kind", baseline_kind, "uniform | softq");
  baseline->add_option("--steps", baseline_steps, "total env steps");

  uint64_t oracle_seed = 20260809;
  CLI::App* oracle = app.add_subcommand(
      "oracle-check", "run the gradient / SR / soft-Q oracle suites");
  oracle->add_option("--seed", oracle_seed, "suite seed");

  std::string figs_run, figs_baseline, figs_out = "out/figs";
  bool figs_fig1 = false;
  CLI::App* figs = app.add_subcommand(
      "figs", "emit SR heatmaps, abstraction maps and comparison CSVs");
  figs->add_option("--run", figs_run, "training output directory (one seed)");
  figs->add_option("--baseline", figs_baseline, "baseline output directory");
  figs->add_flag("--fig1", figs_fig1, "two-room oracle SR distance heatmaps");
  figs->add_option("--out", figs_out, "output directory");

  std::string config_doc;
  train->add_option("--config", config_doc,
                    "read options from an INI file (expanded before parsing)");
  baseline->add_option("--config", config_doc,
                       "read options from an INI file (expanded before parsing)");

  try {
    const std::vector<std::string> args = expand_config_args(argc, argv);
    std::vector<const char*> ptrs;
    ptrs.reserve(args.size());
    for (const auto& a : args) ptrs.push_back(a.c_str());
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    if (*train) return cmd_train(train_spec);
    if (*baseline) return cmd_baseline(base_spec, baseline_kind, baseline_steps);
    if (*oracle) return cmd_oracle_check(oracle_seed);
    if (*figs) return cmd_figs(figs_run, figs_baseline, figs_fig1, figs_out);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
