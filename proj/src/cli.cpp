#include "gpcgc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "gpcgc/bitstream.hpp"
#include "gpcgc/codec.hpp"
#include "gpcgc/config.hpp"
#include "gpcgc/errors.hpp"
#include "gpcgc/gic.hpp"
#include "gpcgc/metrics.hpp"
#include "gpcgc/ply_io.hpp"

namespace gpcgc::cli {
namespace {

constexpr int kNormalNeighbors = 9;

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::vector<uint8_t> read_binary_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open file: " + path);
  return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
}

void write_binary_file(const std::string& path, const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DomainError("write failed: " + path);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_train(const std::string& input_dir, const std::string& config_path,
              const std::string& out_path, std::ostream& out) {
  CodecConfig cfg;
  if (!config_path.empty()) cfg = load_config_file(config_path);
  validate_config(cfg);

  std::vector<std::string> files;
  if (!std::filesystem::is_directory(input_dir))
    throw DomainError("not a directory: " + input_dir);
  for (const auto& e : std::filesystem::directory_iterator(input_dir))
    if (e.is_regular_file() && e.path().extension() == ".ply")
      files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw TrainingError("no training data in " + input_dir);

  std::vector<PointCloud> clouds;
  clouds.reserve(files.size());
  for (const auto& f : files) clouds.push_back(read_ply_file(f));

  const GicModel model = train_model(clouds, cfg);
  save_model_file(model, out_path);
  out << "trained " << model.entries.size() << " map coders from " << files.size()
      << " clouds\n";
  out << "parameters: " << model.parameter_count() << "\n";
  out << "model: " << out_path << "\n";
  return kOk;
}

int cmd_encode(const std::string& input_path, const std::string& model_path, double lambda,
               const std::string& out_path, int threads, std::ostream& out) {
  const GicModel model = load_model_file(model_path);
  const PointCloud cloud = read_ply_file(input_path);
  const EncodeResult result = encode_cloud(cloud, model, lambda, threads);
  write_binary_file(out_path, result.bytes);
  out << "points: " << result.stats.points_in << "\n";
  out << "bits: " << result.stats.total_bits << " (header " << result.stats.header_bits
      << ", structure " << result.stats.structure_bits << ", payload "
      << result.stats.payload_bits << ")\n";
  out << "bpp: " << fmt_real(result.stats.bpp) << "\n";
  for (size_t lvl = 0; lvl < result.stats.leaves_per_level.size(); ++lvl)
    out << "leaves at level " << lvl << ": " << result.stats.leaves_per_level[lvl] << "\n";
  return kOk;
}

int cmd_decode(const std::string& input_path, const std::string& model_path,
               const std::string& out_path, int threads, int grid_level, bool binary,
               std::ostream& out) {
  const GicModel model = load_model_file(model_path);
  const std::vector<uint8_t> bytes = read_binary_file(input_path);
  const PointCloud cloud = decode_stream(bytes, model, threads, grid_level);
  write_ply_file(out_path, cloud, binary ? PlyFormat::Binary : PlyFormat::Ascii);
  out << "points: " << cloud.size() << "\n";
  out << "output: " << out_path << "\n";
  return kOk;
}

int cmd_eval(const std::string& ref_path, const std::string& rec_path,
             const std::string& stream_path, std::string name, int bit_depth, int threads,
             std::ostream& out) {
  const PointCloud ref = read_ply_file(ref_path);
  const PointCloud rec = read_ply_file(rec_path);
  if (ref.empty() || rec.empty()) throw DomainError("eval: clouds must be non-empty");

  MetricsReport report;
  report.num_points_in = ref.size();
  report.num_points_out = rec.size();
  report.d1_mse = d1_distortion(ref, rec, threads);
  const std::vector<Normal> normals = estimate_normals(
      ref, std::min<int>(kNormalNeighbors, static_cast<int>(ref.size())), threads);
  report.d2_mse = d2_distortion(ref, rec, normals, threads);
  const int peak_bits = bit_depth > 0 ? bit_depth : ref.bit_depth();
  report.d1_psnr = geometry_psnr(report.d1_mse, peak_bits);
  report.d2_psnr = geometry_psnr(report.d2_mse, peak_bits);
  if (!stream_path.empty()) {
    const std::vector<uint8_t> bytes = read_binary_file(stream_path);
    report.bpp =
        static_cast<double>(stream_bit_count(bytes)) / static_cast<double>(ref.size());
  }
  if (name.empty()) name = std::filesystem::path(rec_path).filename().string();
  out << MetricsReport::csv_header() << "\n" << report.csv_line(name) << "\n";
  return kOk;
}

int cmd_sweep(const std::string& input_path, const std::string& model_path,
              std::vector<double> lambdas, const std::string& out_path, int threads,
              std::ostream& out) {
  if (lambdas.empty()) throw DomainError("sweep: need at least one lambda");
  std::sort(lambdas.begin(), lambdas.end());
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());

  const GicModel model = load_model_file(model_path);
  const PointCloud input = read_ply_file(input_path);
  const PointCloud ref = voxelize(input, model.config.bit_depth);
  if (ref.empty()) throw DomainError("sweep: input cloud is empty");
  const std::vector<Normal> normals = estimate_normals(
      ref, std::min<int>(kNormalNeighbors, static_cast<int>(ref.size())), threads);

  struct Row {
    double lambda, bpp, d1_psnr, d2_psnr, enc_s, dec_s;
  };
  std::vector<Row> rows;
  for (double lambda : lambdas) {
    Row row{};
    row.lambda = lambda;
    auto t0 = std::chrono::steady_clock::now();
    const EncodeResult enc = encode_cloud(input, model, lambda, threads);
    row.enc_s = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const PointCloud rec = decode_stream(enc.bytes, model, threads);
    row.dec_s = seconds_since(t0);
    row.bpp = enc.stats.bpp;
    row.d1_psnr = geometry_psnr(d1_distortion(ref, rec, threads), ref.bit_depth());
    row.d2_psnr = geometry_psnr(d2_distortion(ref, rec, normals, threads), ref.bit_depth());
    rows.push_back(row);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.bpp != b.bpp) return a.bpp < b.bpp;
    return a.lambda > b.lambda;
  });

  std::ostringstream csv;
  csv << "lambda,bpp,d1_psnr,d2_psnr,encode_seconds,decode_seconds\n";
  for (const Row& r : rows)
    csv << fmt_real(r.lambda) << ',' << fmt_real(r.bpp) << ',' << fmt_real(r.d1_psnr) << ','
        << fmt_real(r.d2_psnr) << ',' << fmt_real(r.enc_s) << ',' << fmt_real(r.dec_s)
        << "\n";
  if (out_path.empty() || out_path == "-") {
    out << csv.str();
  } else {
    std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
    if (!f) throw DomainError("cannot open for writing: " + out_path);
    f << csv.str();
    out << "sweep: " << rows.size() << " points -> " << out_path << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Voxel point-cloud geometry codec"};
  app.fallthrough();  // lets --threads appear after the subcommand
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "worker thread cap (applies to any subcommand)")
      ->check(CLI::Range(1, 256));

  std::string train_in, train_cfg, train_out;
  CLI::App* train = app.add_subcommand("train", "train map coders from a directory of PLYs");
  train->add_option("--input", train_in, "directory of training .ply files")->required();
  train->add_option("--config", train_cfg, "key=value config file");
  train->add_option("--out", train_out, "output model path")->required();

  std::string enc_in, enc_model, enc_out;
  double enc_lambda = 1.0;
  CLI::App* encode = app.add_subcommand("encode", "encode a PLY into a coded stream");
  encode->add_option("--input", enc_in, "input .ply")->required();
  encode->add_option("--model", enc_model, "trained model file")->required();
  encode->add_option("--lambda", enc_lambda, "rate-control lambda (> 0)")->required();
  encode->add_option("--out", enc_out, "output stream path")->required();

  std::string dec_in, dec_model, dec_out;
  int dec_grid = -1;
  bool dec_binary = false;
  CLI::App* decode = app.add_subcommand("decode", "decode a stream back to a PLY");
  decode->add_option("--input", dec_in, "input stream")->required();
  decode->add_option("--model", dec_model, "trained model file")->required();
  decode->add_option("--out", dec_out, "output .ply")->required();
  decode->add_option("--grid-level", dec_grid,
                     "decode only map pyramid levels 0..K (-1 = all)");
  decode->add_flag("--binary", dec_binary, "write binary PLY");

  std::string eval_ref, eval_rec, eval_stream, eval_name;
  int eval_depth = 0;
  CLI::App* eval = app.add_subcommand("eval", "distortion/rate report as CSV");
  eval->add_option("--ref", eval_ref, "reference .ply")->required();
  eval->add_option("--rec", eval_rec, "reconstructed .ply")->required();
  eval->add_option("--stream", eval_stream, "coded stream for the bpp column");
  eval->add_option("--name", eval_name, "row label (default: rec filename)");
  eval->add_option("--bit-depth", eval_depth, "PSNR peak bit depth (default: from ref)");

  std::string sweep_in, sweep_model, sweep_out;
  std::vector<double> sweep_lambdas;
  CLI::App* sweep = app.add_subcommand("sweep", "rate-distortion curve over lambdas");
  sweep->add_option("--input", sweep_in, "input .ply")->required();
  sweep->add_option("--model", sweep_model, "trained model file")->required();
  sweep->add_option("--lambdas", sweep_lambdas, "comma-separated lambda list")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", sweep_out, "output CSV path ('-' = stdout)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (train->parsed()) return cmd_train(train_in, train_cfg, train_out, out);
    if (encode->parsed())
      return cmd_encode(enc_in, enc_model, enc_lambda, enc_out, threads, out);
    if (decode->parsed())
      return cmd_decode(dec_in, dec_model, dec_out, threads, dec_grid, dec_binary, out);
    if (eval->parsed())
      return cmd_eval(eval_ref, eval_rec, eval_stream, eval_name, eval_depth, threads, out);
    if (sweep->parsed())
      return cmd_sweep(sweep_in, sweep_model, sweep_lambdas, sweep_out, threads, out);
  } catch (const ModelMismatchError& e) {
    err << "error: " << e.what() << "\n";
    return kModelMismatch;
  } catch (const TrainingError& e) {
    err << "error: " << e.what() << "\n";
    return kTrainingFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  }
  err << "error: no subcommand\n";
  return kUsage;
}

}  // namespace gpcgc::cli
