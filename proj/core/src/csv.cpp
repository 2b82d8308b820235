#include "geomwork/csv.hpp"

#include <cstdio>

namespace geomwork::csv {

std::string format_double(double v) {
    char buf[40];
    const double z = v == 0.0 ? 0.0 : v; // drop the sign of -0
    std::snprintf(buf, sizeof buf, "%.17g", z);
    return buf;
}

std::string format_optional(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}

Writer::Writer(std::initializer_list<std::string_view> header) {
    for (auto h : header) cell(h);
    end_row();
}

void Writer::sep() {
    if (row_open_) out_ += ',';
    row_open_ = true;
}

Writer& Writer::cell(double v) {
    sep();
    out_ += format_double(v);
    return *this;
}

Writer& Writer::cell(const std::optional<double>& v) {
    sep();
    out_ += format_optional(v);
    return *this;
}

Writer& Writer::cell(std::size_t v) {
    sep();
    out_ += std::to_string(v);
    return *this;
}

Writer& Writer::cell(std::string_view v) {
    sep();
    out_ += v;
    return *this;
}

void Writer::end_row() {
    out_ += '\n';
    row_open_ = false;
}

} // namespace geomwork::csv
