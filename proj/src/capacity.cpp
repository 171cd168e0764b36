#include "capgen/capacity.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace capgen {

void check_ground_size(int n) {
    if (n < kMinCriteria || n > kMaxCriteria) {
        throw std::invalid_argument("ground set size must be in [2, 8], got " + std::to_string(n));
    }
}

SubsetId::SubsetId(int n, Mask mask) : n_(n), mask_(mask) {
    check_ground_size(n);
    if (mask > full_mask(n)) throw std::invalid_argument("subset mask out of range");
}

std::string SubsetId::label() const { return subset_label(n_, mask_); }

std::string subset_label(int n, Mask mask) {
    if (mask == full_mask(n)) return "N";
    std::string s = "{";
    bool first = true;
    for (int i = 0; i < n; ++i) {
        if (mask & (Mask{1} << i)) {
            if (!first) s += ',';
            s += std::to_string(i + 1);
            first = false;
        }
    }
    s += '}';
    return s;
}

Mask parse_subset_label(int n, const std::string& text) {
    if (text == "N") return full_mask(n);
    if (text.size() < 2 || text.front() != '{' || text.back() != '}') {
        throw std::invalid_argument("malformed subset label: " + text);
    }
    Mask m = 0;
    std::stringstream ss(text.substr(1, text.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        int e = std::stoi(item);
        if (e < 1 || e > n) throw std::invalid_argument("subset element out of range: " + text);
        m |= Mask{1} << (e - 1);
    }
    return m;
}

CardLexOrder::CardLexOrder(int n) : n_(n), rank_(lattice_size(n), 0) {
    check_ground_size(n);
    for (Mask m = 1; m < full_mask(n); ++m) order_.push_back(m);
    // Lexicographic on sorted element lists == compare the lowest differing
    // element: the set holding it comes first.
    std::sort(order_.begin(), order_.end(), [](Mask a, Mask b) {
        if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
        Mask diff = a ^ b;
        Mask low = diff & (~diff + 1);
        return (a & low) != 0;
    });
    for (std::size_t i = 0; i < order_.size(); ++i) rank_[order_[i]] = static_cast<int>(i + 1);
}

std::vector<Mask> CardLexOrder::all_subsets() const {
    std::vector<Mask> all{0};
    all.insert(all.end(), order_.begin(), order_.end());
    all.push_back(full_mask(n_));
    return all;
}

Alternative::Alternative(std::vector<double> scores) : scores_(std::move(scores)) {
    check_ground_size(n());
    for (double v : scores_) {
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("alternative scores must lie in [0,1]");
    }
}

Alternative Alternative::binary(int n, Mask b) {
    std::vector<double> x(n, 0.0);
    for (int i = 0; i < n; ++i) x[i] = (b >> i) & 1 ? 1.0 : 0.0;
    return Alternative(std::move(x));
}

Capacity::Capacity(int n, std::vector<double> values, bool) : n_(n), values_(std::move(values)) {}

Capacity::Capacity(int n, std::vector<double> values) : Capacity(n, std::move(values), true) {
    check_ground_size(n);
    if (values_.size() != lattice_size(n)) throw std::invalid_argument("capacity needs 2^n coefficients");
    if (!is_monotone(values_)) throw std::invalid_argument("coefficients are not a normalized monotone capacity");
}

Capacity Capacity::trusted(int n, std::vector<double> values) { return Capacity(n, std::move(values), true); }

Capacity Capacity::uniform_additive(int n) {
    check_ground_size(n);
    std::vector<double> v(lattice_size(n));
    for (Mask m = 0; m < v.size(); ++m) v[m] = static_cast<double>(popcount(m)) / n;
    v[full_mask(n)] = 1.0;
    return Capacity(n, std::move(v));
}

Capacity Capacity::dual() const {
    std::vector<double> v(values_.size());
    const Mask full = full_mask(n_);
    for (Mask m = 0; m <= full; ++m) v[m] = 1.0 - values_[full & ~m];
    return Capacity(n_, std::move(v));
}

namespace {

// Ascending sort of criteria; ties by criterion index.
std::vector<int> sorting_permutation(std::span<const double> x) {
    std::vector<int> tau(x.size());
    std::iota(tau.begin(), tau.end(), 0);
    std::stable_sort(tau.begin(), tau.end(), [&](int a, int b) { return x[a] < x[b]; });
    return tau;
}

}  // namespace

double choquet(const Capacity& mu, const Alternative& x) {
    if (mu.n() != x.n()) throw std::invalid_argument("choquet: dimension mismatch");
    auto tau = sorting_permutation(x.scores());
    Mask upper = full_mask(mu.n());
    double prev = 0.0, sum = 0.0;
    for (int k : tau) {
        sum += (x[k] - prev) * mu[upper];
        prev = x[k];
        upper &= ~(Mask{1} << k);
    }
    return sum;
}

ChoquetForm choquet_form(const Alternative& x) {
    const int n = x.n();
    ChoquetForm form{std::vector<double>(lattice_size(n), 0.0), 0.0};
    auto tau = sorting_permutation(x.scores());
    Mask upper = full_mask(n);
    double prev = 0.0;
    for (int k : tau) {
        double w = x[k] - prev;
        if (upper == full_mask(n)) form.constant += w;
        else form.coef[upper] += w;
        prev = x[k];
        upper &= ~(Mask{1} << k);
    }
    return form;
}

bool is_monotone(std::span<const double> values) {
    const std::size_t size = values.size();
    if (size < 4 || !std::has_single_bit(size)) return false;
    const Mask full = static_cast<Mask>(size - 1);
    if (values[0] != 0.0 || values[full] != 1.0) return false;
    for (Mask m = 0; m < full; ++m) {
        for (Mask bit = 1; bit <= full; bit <<= 1) {
            if ((m & bit) == 0 && !(values[m] <= values[m | bit])) return false;
        }
    }
    return true;
}

RankRange unconditional_rank_bounds(const SubsetId& s) {
    if (!s.is_free()) throw std::invalid_argument("rank bounds undefined for the empty set and N");
    const int n = s.n();
    const int k = s.cardinality();
    return {(1 << k) - 1, (1 << n) - (1 << (n - k))};
}

void write_capacity_csv(std::ostream& out, int n, std::span<const Capacity> caps) {
    CardLexOrder order(n);
    auto cols = order.all_subsets();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out << ',';
        out << '"' << (cols[i] == 0 ? std::string("{}") : subset_label(n, cols[i])) << '"';
    }
    out << '\n';
    char buf[40];
    for (const auto& c : caps) {
        if (c.n() != n) throw std::invalid_argument("capacity dimension mismatch in CSV output");
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) out << ',';
            std::snprintf(buf, sizeof buf, "%.17g", c[cols[i]]);
            out << buf;
        }
        out << '\n';
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') quoted = !quoted;
        else if (ch == ',' && !quoted) {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') cur += ch;
    }
    cells.push_back(cur);
    return cells;
}

}  // namespace

std::vector<Capacity> read_capacity_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("capacity CSV: missing header");
    auto header = split_csv_line(line);
    std::size_t cols = header.size();
    if (cols < 4 || !std::has_single_bit(cols)) throw std::runtime_error("capacity CSV: header must have 2^n columns");
    int n = std::countr_zero(cols);
    check_ground_size(n);
    std::vector<Mask> masks(cols);
    try {
        for (std::size_t i = 0; i < cols; ++i) masks[i] = parse_subset_label(n, header[i]);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("capacity CSV: ") + e.what());
    }
    std::vector<Capacity> caps;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != cols) throw std::runtime_error("capacity CSV: wrong column count on row " + std::to_string(row));
        std::vector<double> v(cols);
        try {
            for (std::size_t i = 0; i < cols; ++i) v[masks[i]] = std::stod(cells[i]);
            caps.emplace_back(n, std::move(v));
        } catch (const std::exception& e) {
            throw std::runtime_error("capacity CSV: row " + std::to_string(row) + ": " + e.what());
        }
    }
    return caps;
}

}  // namespace capgen
