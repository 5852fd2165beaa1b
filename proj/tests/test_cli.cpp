// End-to-end checks of the snr_enhance binary: exit codes, printed contracts
// and file outputs. The binary path comes from the build system.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "snre/mlp.hpp"
#include "snre/rng.hpp"
#include "snre/stft.hpp"
#include "snre/wav.hpp"
#include "synth.hpp"

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

RunResult run(const std::string& args) {
  const std::string out_file = "cli_output.txt";
  const std::string command =
      std::string(SNR_ENHANCE_BIN) + " " + args + " > " + out_file + " 2>&1";
  const int status = std::system(command.c_str());
  std::ifstream is(out_file);
  std::stringstream buffer;
  buffer << is.rdbuf();
  is.close();
  std::remove(out_file.c_str());
  return {WEXITSTATUS(status), buffer.str()};
}

void write_noisy_wav(const std::string& path, double seconds, std::uint64_t seed,
                     int rate = 16000) {
  snre::Rng rng(seed);
  auto x = synth::harmonic_speech(seconds, 16000, rng);
  const auto noise = synth::white_noise(x.size(), rng, 0.1);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.4 * x[i] + noise[i] * 0.2;
  snre::write_wav(path, x, rate, snre::WavFormat::kPcm16);
}

}  // namespace

TEST_CASE("enhance nonml produces a wav of the synthesized length") {
  write_noisy_wav("cli_in.wav", 1.5, 1);
  const RunResult result = run("enhance cli_in.wav cli_out.wav --mode nonml");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("frames=") != std::string::npos);
  CHECK(result.output.find("seconds=") != std::string::npos);

  const snre::WavFile in = snre::read_wav("cli_in.wav");
  const snre::WavFile out = snre::read_wav("cli_out.wav");
  const std::size_t n_frames = (in.samples.size() - 512) / 256 + 1;
  CHECK(out.samples.size() == (n_frames - 1) * 256 + 512);
  CHECK(out.format == snre::WavFormat::kPcm16);  // same format as the input
  std::remove("cli_in.wav");
  std::remove("cli_out.wav");
}

TEST_CASE("enhance rejects a 44.1 kHz file with a format error naming 16000") {
  write_noisy_wav("cli_441.wav", 0.5, 2, 44100);
  const RunResult result = run("enhance cli_441.wav cli_out.wav");
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("16000") != std::string::npos);
  std::remove("cli_441.wav");
}

TEST_CASE("enhance ml requires a model") {
  write_noisy_wav("cli_in2.wav", 0.5, 3);
  const RunResult result = run("enhance cli_in2.wav cli_out.wav --mode ml");
  CHECK(result.exit_code == 1);
  CHECK(result.output.find("--model") != std::string::npos);
  std::remove("cli_in2.wav");
}

TEST_CASE("enhance ml with mismatched model/kind dims names both dims") {
  write_noisy_wav("cli_in3.wav", 0.5, 4);
  const snre::MlpModel model = snre::glorot_init(std::vector<int>{1028, 4, 257}, 1);
  snre::save_model(model, "cli_model_1028.snrdnn");
  const RunResult result =
      run("enhance cli_in3.wav cli_out.wav --mode ml --model cli_model_1028.snrdnn "
          "--kind xi+gamma");
  CHECK(result.exit_code == 1);
  CHECK(result.output.find("1028") != std::string::npos);
  CHECK(result.output.find("2056") != std::string::npos);
  std::remove("cli_in3.wav");
  std::remove("cli_model_1028.snrdnn");
}

TEST_CASE("unknown kind lists the valid spellings") {
  write_noisy_wav("cli_in4.wav", 0.5, 5);
  const RunResult result = run("features cli_in4.wav cli.feat --kind nope");
  CHECK(result.exit_code == 1);
  CHECK(result.output.find("xi+gamma") != std::string::npos);
  std::remove("cli_in4.wav");
}

TEST_CASE("features prints the context-stacked dimensionality") {
  write_noisy_wav("cli_feat.wav", 1.0, 6);
  SUBCASE("single kind is 1028") {
    const RunResult result = run("features cli_feat.wav cli.feat --kind gamma");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("dim=1028") != std::string::npos);
  }
  SUBCASE("concatenated kind is 2056") {
    const RunResult result = run("features cli_feat.wav cli.feat --kind xi+gamma");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("dim=2056") != std::string::npos);
  }
  std::ifstream feat("cli.feat", std::ios::binary);
  char magic[8];
  feat.read(magic, 8);
  CHECK(std::string(magic, 8) == "SNRFEAT1");
  feat.close();
  std::remove("cli_feat.wav");
  std::remove("cli.feat");
}

TEST_CASE("eval prints the metric line and validates lengths") {
  write_noisy_wav("cli_eval.wav", 1.0, 7);
  SUBCASE("a file against itself hits the ceiling") {
    const RunResult result = run("eval cli_eval.wav cli_eval.wav");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("segsnr_db=35.0000") != std::string::npos);
    CHECK(result.output.find("lsd_db=0.0000") != std::string::npos);
  }
  SUBCASE("length mismatch is an error naming both lengths") {
    write_noisy_wav("cli_eval_short.wav", 0.5, 8);
    const RunResult result = run("eval cli_eval.wav cli_eval_short.wav");
    CHECK(result.exit_code != 0);
    const snre::WavFile a = snre::read_wav("cli_eval.wav");
    const snre::WavFile b = snre::read_wav("cli_eval_short.wav");
    CHECK(result.output.find(std::to_string(a.samples.size())) != std::string::npos);
    CHECK(result.output.find(std::to_string(b.samples.size())) != std::string::npos);
    std::remove("cli_eval_short.wav");
  }
  std::remove("cli_eval.wav");
}

TEST_CASE("train builds a valid model deterministically") {
  snre::Rng rng(9);
  const auto speech1 = synth::harmonic_speech(0.6, 16000, rng);
  const auto speech2 = synth::harmonic_speech(0.8, 16000, rng);
  const auto noise = synth::white_noise(2 * 16000, rng, 0.3);
  snre::write_wav("cli_sp1.wav", speech1, 16000, snre::WavFormat::kFloat32);
  snre::write_wav("cli_sp2.wav", speech2, 16000, snre::WavFormat::kFloat32);
  snre::write_wav("cli_nse.wav", noise, 16000, snre::WavFormat::kFloat32);
  {
    std::ofstream manifest("cli_corpus.txt");
    manifest << "# tiny corpus\n"
                "speech=cli_sp1.wav noise=cli_nse.wav snr=5 peak=-12 seed=1\n"
                "speech=cli_sp2.wav noise=cli_nse.wav snr=0 peak=-18 seed=2\n";
  }
  {
    std::ofstream conf("cli_train.conf");
    conf << "dataset.init_seconds = 0.3\n";
  }

  const std::string args =
      "train cli_corpus.txt cli_model.snrdnn --kind gamma --hidden 6 --seed 11 "
      "--config cli_train.conf";
  const RunResult result = run(args);
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("epochs=") != std::string::npos);

  const snre::MlpModel model = snre::load_model("cli_model.snrdnn");
  CHECK(model.input_dim() == 1028);
  CHECK(model.output_dim() == 257);

  // History file: epoch<TAB>train_J<TAB>val_J per line.
  std::ifstream history("cli_model.snrdnn.history");
  REQUIRE(history.good());
  std::string line;
  int lines = 0;
  while (std::getline(history, line)) {
    int epoch;
    double train_j, val_j;
    CHECK(std::sscanf(line.c_str(), "%d\t%lf\t%lf", &epoch, &train_j, &val_j) == 3);
    CHECK(epoch == lines);
    ++lines;
  }
  CHECK(lines >= 11);
  history.close();

  // Identical seeds give bit-identical model files.
  const RunResult rerun = run(
      "train cli_corpus.txt cli_model2.snrdnn --kind gamma --hidden 6 --seed 11 "
      "--config cli_train.conf");
  CHECK(rerun.exit_code == 0);
  std::ifstream m1("cli_model.snrdnn", std::ios::binary);
  std::ifstream m2("cli_model2.snrdnn", std::ios::binary);
  const std::vector<char> bytes1((std::istreambuf_iterator<char>(m1)),
                                 std::istreambuf_iterator<char>());
  const std::vector<char> bytes2((std::istreambuf_iterator<char>(m2)),
                                 std::istreambuf_iterator<char>());
  CHECK(bytes1 == bytes2);
  m1.close();
  m2.close();

  // The trained model is usable by enhance ml.
  write_noisy_wav("cli_ml_in.wav", 1.0, 10);
  const RunResult enhance_run = run(
      "enhance cli_ml_in.wav cli_ml_out.wav --mode ml --model cli_model.snrdnn "
      "--kind gamma");
  CHECK(enhance_run.exit_code == 0);

  for (const char* f :
       {"cli_sp1.wav", "cli_sp2.wav", "cli_nse.wav", "cli_corpus.txt", "cli_train.conf",
        "cli_model.snrdnn", "cli_model.snrdnn.history", "cli_model2.snrdnn",
        "cli_model2.snrdnn.history", "cli_ml_in.wav", "cli_ml_out.wav"}) {
    std::remove(f);
  }
}

TEST_CASE("manifest errors cite the line and exit with the IO code") {
  {
    std::ofstream manifest("cli_bad_corpus.txt");
    manifest << "speech=a.wav noise=n.wav snr=5 peak=-12 seed=1\n"
                "speech=b.wav noise=n.wav snr=5 peak=-12 seed=2\n"
                "this line is wrong\n";
  }
  const RunResult result = run("train cli_bad_corpus.txt cli_model.snrdnn");
  CHECK(result.exit_code == 2);
  CHECK(result.output.find(":3") != std::string::npos);
  std::remove("cli_bad_corpus.txt");
}

TEST_CASE("usage errors") {
  CHECK(run("").exit_code == 1);
  CHECK(run("unknown-command").exit_code == 1);
  CHECK(run("enhance onlyone.wav").exit_code == 1);
  CHECK(run("enhance missing.wav out.wav").exit_code == 2);  // unreadable input
}
