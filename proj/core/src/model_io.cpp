#include "stackfuse/model_io.hpp"

#include "stackfuse/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace stackfuse {
namespace {

constexpr const char* kMlpHeader = "stackfuse-mlp v1";
constexpr const char* kFusionHeader = "stackfuse-fusion v1";

void write_value(std::ostream& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
}

void write_matrix(std::ostream& out, const char* name, const Eigen::MatrixXd& m) {
    out << name << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ' ';
            write_value(out, m(r, c));
        }
        out << '\n';
    }
}

void write_vector(std::ostream& out, const char* name, const Eigen::VectorXd& v) {
    out << name << '\n';
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out << ' ';
        write_value(out, v(i));
    }
    out << '\n';
}

double read_double_token(std::istream& in, const std::string& file) {
    std::string token;
    if (!(in >> token)) throw FormatError(file + ": truncated numeric block");
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw FormatError(file + ": bad number '" + token + "'");
    }
    return value;
}

void read_block_header(std::istream& in, const std::string& expected, const std::string& file) {
    std::string name;
    if (!(in >> name) || name != expected) {
        throw FormatError(file + ": expected block '" + expected + "'");
    }
}

} // namespace

void save_mlp(const Mlp& net, const std::filesystem::path& path) {
    if (!(net.hidden_activation == net.output_activation)) {
        throw InvalidArgumentError(
            "save_mlp: v1 files carry one activation for both layers; differing hidden/output "
            "activations are not representable");
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << kMlpHeader << '\n';
    out << "sizes " << net.input_size() << ' ' << net.hidden_size() << ' ' << net.output_size()
        << '\n';
    out << "activation " << to_string(net.hidden_activation.type) << ' ';
    write_value(out, net.hidden_activation.steepness);
    out << '\n';
    write_matrix(out, "weights_ih", net.weights_ih);
    write_vector(out, "bias_h", net.bias_h);
    write_matrix(out, "weights_ho", net.weights_ho);
    write_vector(out, "bias_o", net.bias_o);
    if (!out) throw IoError("failed writing " + path.string());
}

Mlp load_mlp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    const std::string file = path.string();

    std::string line;
    if (!std::getline(in, line) || line != kMlpHeader) {
        throw FormatError(file + ": not a stackfuse mlp file (bad header)");
    }
    std::string key;
    Eigen::Index in_size = 0, hidden_size = 0, out_size = 0;
    if (!(in >> key >> in_size >> hidden_size >> out_size) || key != "sizes") {
        throw FormatError(file + ": missing sizes line");
    }
    if (in_size < 1 || hidden_size < 1 || out_size < 1) {
        throw FormatError(file + ": invalid layer sizes");
    }
    std::string kind;
    if (!(in >> key >> kind) || key != "activation") {
        throw FormatError(file + ": missing activation line");
    }
    const double steepness = read_double_token(in, file);
    ActivationKind act;
    act.type = activation_type_from_string(kind);
    act.steepness = steepness;

    Mlp net;
    net.hidden_activation = act;
    net.output_activation = act;
    net.weights_ih.resize(hidden_size, in_size);
    net.weights_ho.resize(out_size, hidden_size);
    net.bias_h.resize(hidden_size);
    net.bias_o.resize(out_size);

    read_block_header(in, "weights_ih", file);
    for (Eigen::Index r = 0; r < hidden_size; ++r)
        for (Eigen::Index c = 0; c < in_size; ++c) net.weights_ih(r, c) = read_double_token(in, file);
    read_block_header(in, "bias_h", file);
    for (Eigen::Index i = 0; i < hidden_size; ++i) net.bias_h(i) = read_double_token(in, file);
    read_block_header(in, "weights_ho", file);
    for (Eigen::Index r = 0; r < out_size; ++r)
        for (Eigen::Index c = 0; c < hidden_size; ++c) net.weights_ho(r, c) = read_double_token(in, file);
    read_block_header(in, "bias_o", file);
    for (Eigen::Index i = 0; i < out_size; ++i) net.bias_o(i) = read_double_token(in, file);
    return net;
}

void save_fusion_model(const FusionModel& model, const std::filesystem::path& dir,
                       const std::string& split_plan_ref) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    save_mlp(model.net1.net, dir / "net1.mlp");
    save_mlp(model.net2.net, dir / "net2.mlp");

    std::ofstream out(dir / "fusion.manifest");
    if (!out) throw IoError("cannot open " + (dir / "fusion.manifest").string() + " for writing");
    out << kFusionHeader << '\n';
    out << "descriptor_len " << model.descriptor_len << '\n';
    out << "num_classes " << model.num_classes << '\n';
    out << "hidden1 " << model.net1.net.hidden_size() << '\n';
    out << "hidden2 " << model.net2.net.hidden_size() << '\n';
    out << "net1_best_epoch " << model.net1.best_epoch << '\n';
    out << "net1_best_monitor_mse ";
    write_value(out, model.net1.best_monitor_mse);
    out << '\n';
    out << "net2_best_epoch " << model.net2.best_epoch << '\n';
    out << "net2_best_monitor_mse ";
    write_value(out, model.net2.best_monitor_mse);
    out << '\n';
    out << "split_plan " << (split_plan_ref.empty() ? "-" : split_plan_ref) << '\n';
    if (!out) throw IoError("failed writing fusion manifest");
}

FusionModel load_fusion_model(const std::filesystem::path& dir) {
    const auto manifest_path = dir / "fusion.manifest";
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot open " + manifest_path.string());
    std::string line;
    if (!std::getline(in, line) || line != kFusionHeader) {
        throw FormatError(manifest_path.string() + ": not a stackfuse fusion manifest");
    }
    std::map<std::string, std::string> fields;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto space = line.find(' ');
        if (space == std::string::npos) {
            throw FormatError(manifest_path.string() + ": malformed line '" + line + "'");
        }
        fields[line.substr(0, space)] = line.substr(space + 1);
    }
    auto need = [&](const std::string& key) -> const std::string& {
        auto it = fields.find(key);
        if (it == fields.end()) {
            throw FormatError(manifest_path.string() + ": missing field '" + key + "'");
        }
        return it->second;
    };
    auto parse_double = [&](const std::string& text) {
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            throw FormatError(manifest_path.string() + ": bad number '" + text + "'");
        }
        return value;
    };

    FusionModel model;
    model.descriptor_len = std::stoi(need("descriptor_len"));
    model.num_classes = std::stoi(need("num_classes"));
    model.net1.net = load_mlp(dir / "net1.mlp");
    model.net2.net = load_mlp(dir / "net2.mlp");
    model.net1.best_epoch = std::stoi(need("net1_best_epoch"));
    model.net1.best_monitor_mse = parse_double(need("net1_best_monitor_mse"));
    model.net2.best_epoch = std::stoi(need("net2_best_epoch"));
    model.net2.best_monitor_mse = parse_double(need("net2_best_monitor_mse"));

    if (model.net1.net.input_size() != model.descriptor_len ||
        model.net1.net.output_size() != model.num_classes ||
        model.net2.net.input_size() != model.descriptor_len + model.num_classes ||
        model.net2.net.output_size() != model.num_classes) {
        throw FormatError(dir.string() + ": net shapes disagree with the fusion manifest");
    }
    return model;
}

} // namespace stackfuse
