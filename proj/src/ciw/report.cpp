#include "report.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

#include "spectral.hpp"

namespace ciw {

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("rename failed: " + tmp + " -> " + path);
}

}  // namespace

void write_csv(const std::string& path, const std::vector<ReportRecord>& records) {
    if (records.empty()) throw Error("write_csv: records must be non-empty");
    std::string out = "q,quantity,value,tolerance,status\r\n";
    for (const auto& r : records) {
        out += std::to_string(r.q);
        out += ',';
        out += csv_escape(r.quantity);
        out += ',';
        out += num_str(r.value);
        out += ',';
        out += r.has_tolerance ? num_str(r.tolerance) : std::string("");
        out += ',';
        out += r.has_tolerance ? (r.pass ? "pass" : "fail") : "info";
        out += "\r\n";
    }
    atomic_write(path, out);
}

void write_json(const std::string& path, const ordered_json& doc) {
    if (!doc.contains("schema_version")) throw Error("write_json: schema_version required");
    atomic_write(path, doc.dump(2) + "\n");
}

ordered_json records_to_json(const std::vector<ReportRecord>& records) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : records) {
        ordered_json o;
        o["q"] = r.q;
        o["quantity"] = r.quantity;
        o["value"] = r.value;
        if (r.has_tolerance) {
            o["tolerance"] = r.tolerance;
            o["pass"] = r.pass;
        }
        o["module"] = r.module;
        o["op"] = r.op;
        o["sample"] = r.sample;
        arr.push_back(o);
    }
    return arr;
}

namespace {

#pragma pack(push, 1)
struct DumpHeader {
    char magic[4];
    std::uint32_t version;
    std::uint32_t d;
    std::uint32_t n;
    std::uint32_t nt;
    std::uint32_t components;
    std::uint32_t layout;  // 1 = half-spectrum complex doubles, row-major
    std::uint32_t kind;    // caller-defined field tag
    double T;
    char pad[24];
};
#pragma pack(pop)
static_assert(sizeof(DumpHeader) == 64, "dump header must be 64 bytes");

template <class F>
void dump_impl(const std::string& path, const TimeField<F>& f, std::uint32_t kind,
               std::uint32_t comps) {
    const Grid& g = *f.grid;
    DumpHeader h{};
    std::memcpy(h.magic, "CIWF", 4);
    h.version = 1;
    h.d = g.dim();
    h.n = g.n();
    h.nt = g.nt();
    h.components = comps;
    h.layout = 1;
    h.kind = kind;
    h.T = g.horizon();

    std::string buf;
    buf.append(reinterpret_cast<const char*>(&h), sizeof(h));
    for (int i = 0; i < g.nt(); ++i) {
        auto append_scalar = [&](const ScalarField& s) {
            Spectrum sp = to_spectral(s);
            buf.append(reinterpret_cast<const char*>(sp.c.data()),
                       sp.c.size() * sizeof(cplx));
        };
        if constexpr (std::is_same_v<F, ScalarField>) {
            append_scalar(f.s[i]);
        } else {
            for (const auto& comp : f.s[i].c) append_scalar(comp);
        }
    }
    atomic_write(path, buf);
}

}  // namespace

void dump_field(const std::string& path, const ScalarTimeField& f, std::uint32_t kind) {
    dump_impl(path, f, kind, 1);
}
void dump_field(const std::string& path, const VectorTimeField& f, std::uint32_t kind) {
    dump_impl(path, f, kind, static_cast<std::uint32_t>(f.s[0].c.size()));
}
void dump_field(const std::string& path, const SymTensorTimeField& f, std::uint32_t kind) {
    dump_impl(path, f, kind, static_cast<std::uint32_t>(f.s[0].c.size()));
}

DumpInfo read_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open dump file: " + path);
    DumpHeader h{};
    in.read(reinterpret_cast<char*>(&h), sizeof(h));
    if (!in || std::memcmp(h.magic, "CIWF", 4) != 0)
        throw IoError("not a CIWF dump file: " + path);
    DumpInfo info;
    info.version = h.version;
    info.d = h.d;
    info.n = h.n;
    info.nt = h.nt;
    info.components = h.components;
    info.layout = h.layout;
    info.kind = h.kind;
    info.T = h.T;
    cplx c;
    while (in.read(reinterpret_cast<char*>(&c), sizeof(c))) {
        ++info.coefficients;
        info.max_abs = std::max(info.max_abs, std::abs(c));
    }
    return info;
}

}  // namespace ciw
