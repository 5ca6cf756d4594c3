#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ltt/cfm_trainer.hpp"
#include "ltt/errors.hpp"

using namespace ltt;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TrainConfig tiny_config() {
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 32;
  cfg.learning_rate = 3e-3;
  cfg.hidden_dims = {16, 16};
  cfg.seed = 21;
  cfg.log_every = 1;
  return cfg;
}

}  // namespace

TEST_SUITE("cfm_trainer") {
  TEST_CASE("zero field loss equals E|sigma_dot eps|^2") {
    FieldArchitecture arch;
    arch.input_dim = 2;
    StudentField field(arch, 1);
    const Dataset ds = synth_gaussian(2, 0.0, 1.0, 1024, 2);
    std::vector<ConstSpan> batch;
    for (const auto& s : ds.samples) batch.emplace_back(s);
    Rng rng(3);
    const NoiseSchedule sched(1.0);
    const double l = cfm_batch_loss(field, batch, sched, rng);
    CHECK(l == doctest::Approx(2.0).epsilon(0.05));
  }

  TEST_CASE("zero epochs returns the initial field") {
    TrainConfig cfg = tiny_config();
    cfg.epochs = 0;
    const Dataset ds = synth_gaussian(1, 0.0, 1.0, 64, 1);
    const TrainResult r = train(cfg, ds);
    CHECK(r.history.empty());
    CHECK(r.field.forward(Vector{0.4}, 0.3) == Vector{0.0});
  }

  TEST_CASE("training is deterministic and reduces the loss") {
    const Dataset ds = synth_gaussian(1, 0.0, 1.0, 512, 4);
    TrainConfig cfg = tiny_config();
    cfg.epochs = 20;
    const TrainResult a = train(cfg, ds);
    const TrainResult b = train(cfg, ds);
    REQUIRE(a.history.size() == 20 * 16);
    for (std::size_t i = 0; i < a.history.size(); ++i) CHECK(a.history[i].loss == b.history[i].loss);
    double head = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < 32; ++i) {
      head += a.history[i].loss;
      tail += a.history[a.history.size() - 1 - i].loss;
    }
    CHECK(tail < head);
    const auto dir = std::filesystem::temp_directory_path() / "ltt_unit";
    std::filesystem::create_directories(dir);
    write_loss_csv(a.history, dir / "a.csv");
    write_loss_csv(b.history, dir / "b.csv");
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    const CsvTable t = read_csv(dir / "a.csv");
    CHECK(t.header == std::vector<std::string>{"step", "epoch", "loss"});
    CHECK(t.rows.size() == a.history.size());
  }

  TEST_CASE("observer and checkpoint per epoch") {
    const Dataset ds = synth_gaussian(1, 0.0, 1.0, 100, 5);
    TrainConfig cfg = tiny_config();
    cfg.log_every = 2;
    const auto ckpt = std::filesystem::temp_directory_path() / "ltt_unit" / "epoch.json";
    std::filesystem::create_directories(ckpt.parent_path());
    std::filesystem::remove(ckpt);
    cfg.checkpoint_path = ckpt;
    std::size_t calls = 0;
    const TrainResult r = train(cfg, ds, [&](const LossRecord&) { ++calls; });
    CHECK(r.history.size() == 3 * 4);
    CHECK(calls == 6);
    const StudentField back = load_checkpoint(ckpt);
    CHECK(back.forward(Vector{0.2}, 0.5) == r.field.forward(Vector{0.2}, 0.5));
  }

  TEST_CASE("invalid configuration") {
    const Dataset ds = synth_gaussian(1, 0.0, 1.0, 10, 1);
    TrainConfig cfg = tiny_config();
    cfg.batch_size = 0;
    CHECK_THROWS(train(cfg, ds));
    cfg = tiny_config();
    cfg.learning_rate = -1.0;
    CHECK_THROWS(train(cfg, ds));
    CHECK_THROWS(train(tiny_config(), Dataset{}));
  }
}
