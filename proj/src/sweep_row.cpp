#include "dickehp/sweep_row.hpp"

#include <algorithm>

#include "dickehp/errors.hpp"

namespace dickehp {

void SweepRow::set(const std::string& key, Cell value) {
    for (auto& [k, v] : cells) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    cells.emplace_back(key, std::move(value));
}

const Cell* SweepRow::find(const std::string& key) const {
    for (const auto& [k, v] : cells)
        if (k == key) return &v;
    return nullptr;
}

double SweepRow::number(const std::string& key) const {
    const Cell* c = find(key);
    if (c == nullptr) throw DomainError("SweepRow: no column '" + key + "'");
    if (const auto* d = std::get_if<double>(c)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(c)) return static_cast<double>(*i);
    throw DomainError("SweepRow: column '" + key + "' is not numeric");
}

std::string SweepRow::text(const std::string& key) const {
    const Cell* c = find(key);
    if (c == nullptr) throw DomainError("SweepRow: no column '" + key + "'");
    if (const auto* s = std::get_if<std::string>(c)) return *s;
    throw DomainError("SweepRow: column '" + key + "' is not text");
}

std::vector<std::string> SweepRow::keys() const {
    std::vector<std::string> out;
    out.reserve(cells.size());
    for (const auto& kv : cells) out.push_back(kv.first);
    return out;
}

}  // namespace dickehp
