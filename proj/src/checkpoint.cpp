#include "aim/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "aim/error.hpp"

namespace aim {

namespace {
constexpr const char* kMagic = "AIMCKPT";
constexpr int kVersion = 1;
}

void Checkpoint::add(const std::string& name, const Tensor& t) {
    if (name.empty() || name.find_first_of(" \t\n") != std::string::npos) {
        throw DataError("invalid parameter name: '" + name + "'");
    }
    for (const auto& [n, _] : entries) {
        if (n == name) throw DataError("duplicate parameter name: " + name);
    }
    entries.emplace_back(name, t.detached());
}

const Tensor* Checkpoint::find(const std::string& name) const {
    for (const auto& [n, t] : entries) {
        if (n == name) return &t;
    }
    return nullptr;
}

const Tensor& Checkpoint::require(const std::string& name) const {
    const Tensor* t = find(name);
    if (!t) throw DataError("checkpoint missing parameter: " + name);
    return *t;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write checkpoint: " + path);
    out << kMagic << " " << kVersion << " " << ckpt.entries.size() << "\n";
    char buf[64];
    for (const auto& [name, t] : ckpt.entries) {
        out << "param " << name << " " << t.rank();
        for (std::size_t d : t.shape) out << " " << d;
        out << "\n";
        for (std::size_t i = 0; i < t.numel(); ++i) {
            std::snprintf(buf, sizeof(buf), "%a", t.values[i]);
            out << buf << (i + 1 == t.numel() ? "" : " ");
        }
        out << "\n";
    }
    if (!out) throw DataError("write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read checkpoint: " + path);
    std::string magic;
    int version = 0;
    std::size_t count = 0;
    in >> magic >> version >> count;
    if (magic != kMagic) throw ParseError("not a checkpoint file: " + path);
    if (version != kVersion) throw ParseError("unsupported checkpoint version " + std::to_string(version));

    Checkpoint ckpt;
    for (std::size_t e = 0; e < count; ++e) {
        std::string kw, name;
        std::size_t rank = 0;
        in >> kw >> name >> rank;
        if (kw != "param" || rank < 1 || rank > 2) throw ParseError("malformed checkpoint entry in " + path);
        Shape shape(rank);
        for (std::size_t i = 0; i < rank; ++i) in >> shape[i];
        std::size_t n = shape_numel(shape);
        std::vector<double> values(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::string tok;
            in >> tok;
            char* end = nullptr;
            values[i] = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str()) throw ParseError("bad value in checkpoint " + path);
        }
        if (!in) throw ParseError("truncated checkpoint: " + path);
        ckpt.add(name, Tensor(std::move(shape), std::move(values)));
    }
    return ckpt;
}

} // namespace aim
