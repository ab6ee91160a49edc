#pragma once

#include <filesystem>
#include <istream>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace irp {

// Day indices are 0-based throughout the library (day 0 is the first day of
// the horizon). Node 0 is the supplier/depot, retailers are nodes 1..n.
inline constexpr int kDepot = 0;
inline constexpr double kNoStockout = std::numeric_limits<double>::infinity();

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

enum class InstanceFormat { kClassic, kNative };
enum class CostRounding { kNearestInteger, kExact };

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Dense square matrix of arc costs indexed by node id.
class CostMatrix {
 public:
  CostMatrix() = default;
  explicit CostMatrix(int size) : size_(size), data_(static_cast<std::size_t>(size) * size, 0.0) {}

  int size() const { return size_; }
  double operator()(int i, int j) const { return data_[index(i, j)]; }
  double& operator()(int i, int j) { return data_[index(i, j)]; }
  bool operator==(const CostMatrix&) const = default;

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * size_ + j; }
  int size_ = 0;
  std::vector<double> data_;
};

struct Supplier {
  Point location;
  int initial_stock = 0;
  std::vector<int> production;        // d_0^t, one entry per day
  std::vector<double> holding_cost;   // h_0^t, one entry per day
  bool operator==(const Supplier&) const = default;
};

struct Retailer {
  Point location;
  int initial_stock = 0;
  int max_level = 0;
  std::vector<int> demand;  // d_i^t, one entry per day
  double holding_cost = 0.0;
  bool operator==(const Retailer&) const = default;
};

// Immutable problem data. Construct through parse_instance / make_instance so
// that validate() has run; afterwards the object is only read.
struct Instance {
  std::string name;
  int horizon = 0;
  int vehicles = 1;
  int capacity = 0;
  // rho: a unit of unmet demand at retailer i costs rho * h_i. kNoStockout
  // forbids stock-outs entirely.
  double stockout_factor = kNoStockout;
  Supplier supplier;
  std::vector<Retailer> retailers;
  CostMatrix cost;

  int num_retailers() const { return static_cast<int>(retailers.size()); }
  int num_nodes() const { return num_retailers() + 1; }
  const Retailer& retailer(int id) const { return retailers[static_cast<std::size_t>(id - 1)]; }
  bool allows_stockout() const { return stockout_factor != kNoStockout; }

  // Sum over days s >= day of h_0^s: the supplier holding saved per unit
  // shipped on `day`.
  double supplier_credit(int day) const;

  // Throws ValidationError naming the offending field.
  void validate() const;

  bool operator==(const Instance&) const = default;
};

struct ParseOptions {
  std::string name;
  // Classic files carry the total fleet capacity only; the per-vehicle
  // capacity is floor(total / vehicles).
  int vehicles = 1;
  CostRounding rounding = CostRounding::kNearestInteger;
  std::optional<double> stockout_factor;
};

Instance parse_instance(std::istream& in, InstanceFormat format, const ParseOptions& options = {});
Instance load_instance(const std::filesystem::path& path, InstanceFormat format,
                       ParseOptions options = {});

// Native structured (JSON) document; parse_instance(serialize_native(x)) == x.
std::string serialize_native(const Instance& instance);

CostMatrix build_cost_matrix(std::span<const Point> coords, CostRounding rounding);

// Guess the format from the extension: ".json" is native, anything else classic.
InstanceFormat format_from_path(const std::filesystem::path& path);

}  // namespace irp
