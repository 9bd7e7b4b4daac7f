#pragma once

// Artifact serialization: an insertion-ordered JSON document with all
// numeric fields rendered at 17 significant digits (so identical inputs
// produce byte-identical files), the trajectory CSV schema
// (t, mode_index, u_k, du_k), and atomic file writes (temp + rename).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fracwave/trajectory.hpp"

namespace fracwave::report {

/// %.17g with non-finite values spelled out (JSON has no inf/nan literals;
/// reports should never contain them silently).
inline std::string fmt17(double v) {
    if (!std::isfinite(v)) return v > 0 ? "\"inf\"" : (v < 0 ? "\"-inf\"" : "\"nan\"");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Minimal insertion-ordered JSON value. Library JSON writers choose their
/// own shortest-round-trip float format; reports need a fixed 17-digit
/// rendering, hence this small dedicated type.
class Json {
public:
    Json() : kind_(Kind::object) {}

    static Json number(double v) { return Json(Kind::number, fmt17(v)); }
    static Json integer(std::int64_t v) { return Json(Kind::number, std::to_string(v)); }
    static Json boolean(bool v) { return Json(Kind::number, v ? "true" : "false"); }
    static Json string(std::string v) { return Json(Kind::string, std::move(v)); }
    static Json array() { return Json(Kind::array, ""); }
    static Json array(const std::vector<double>& v) {
        Json a = array();
        for (double x : v) a.push_back(number(x));
        return a;
    }

    Json& set(const std::string& key, Json value) {
        if (kind_ != Kind::object) throw std::logic_error("Json: set on non-object");
        members_.emplace_back(key, std::move(value));
        return *this;
    }
    Json& set(const std::string& key, double v) { return set(key, number(v)); }
    Json& set(const std::string& key, std::int64_t v) { return set(key, integer(v)); }
    Json& set(const std::string& key, std::size_t v) {
        return set(key, integer(static_cast<std::int64_t>(v)));
    }
    Json& set(const std::string& key, bool v) { return set(key, boolean(v)); }
    Json& set(const std::string& key, const char* v) { return set(key, string(v)); }
    Json& set(const std::string& key, const std::string& v) { return set(key, string(v)); }
    Json& set(const std::string& key, const std::vector<double>& v) { return set(key, array(v)); }

    void push_back(Json value) {
        if (kind_ != Kind::array) throw std::logic_error("Json: push_back on non-array");
        items_.push_back(std::move(value));
    }

    std::string dump(int indent = 2) const {
        std::string out;
        write(out, indent, 0);
        out.push_back('\n');
        return out;
    }

private:
    enum class Kind { object, array, number, string };
    Json(Kind k, std::string scalar) : kind_(k), scalar_(std::move(scalar)) {}

    static void escape(std::string& out, const std::string& s) {
        out.push_back('"');
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        out += buf;
                    } else {
                        out.push_back(c);
                    }
            }
        }
        out.push_back('"');
    }

    void write(std::string& out, int indent, int depth) const {
        const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
        const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
        switch (kind_) {
            case Kind::number:
                out += scalar_;
                break;
            case Kind::string:
                escape(out, scalar_);
                break;
            case Kind::object: {
                if (members_.empty()) {
                    out += "{}";
                    break;
                }
                out += "{\n";
                for (std::size_t i = 0; i < members_.size(); ++i) {
                    out += pad;
                    escape(out, members_[i].first);
                    out += ": ";
                    members_[i].second.write(out, indent, depth + 1);
                    if (i + 1 < members_.size()) out += ",";
                    out += "\n";
                }
                out += close_pad + "}";
                break;
            }
            case Kind::array: {
                if (items_.empty()) {
                    out += "[]";
                    break;
                }
                out += "[\n";
                for (std::size_t i = 0; i < items_.size(); ++i) {
                    out += pad;
                    items_[i].write(out, indent, depth + 1);
                    if (i + 1 < items_.size()) out += ",";
                    out += "\n";
                }
                out += close_pad + "]";
                break;
            }
        }
    }

    Kind kind_;
    std::string scalar_;
    std::vector<std::pair<std::string, Json>> members_;
    std::vector<Json> items_;
};

/// Write-then-rename so readers never observe a partial file.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("write_atomic: cannot open " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write_atomic: short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

/// CSV rows (t, mode_index, u_k, du_k), time-major; du_k column is 0 when
/// the trajectory carries no derivative.
inline std::string trajectory_csv(const linear::SolutionTrajectory& traj) {
    std::string out = "t,mode_index,u_k,du_k\n";
    const bool has_du = traj.has_derivative();
    char buf[96];
    for (std::size_t j = 0; j < traj.node_count(); ++j) {
        for (std::size_t k = 0; k < traj.mode_count; ++k) {
            const double du = has_du ? traj.du(k, j) : 0.0;
            std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g,%.17g\n", traj.grid.nodes[j], k + 1,
                          traj.u(k, j), du);
            out += buf;
        }
    }
    return out;
}

}  // namespace fracwave::report
