#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace sltk {

using elem = std::uint32_t;
using Bits = boost::dynamic_bitset<std::uint64_t>;

inline constexpr elem no_elem = static_cast<elem>(-1);

enum class Errc {
  NotAPartialOrder,
  MissingJoin,
  DomainMismatch,
  NotAModule,
  ConditionIFails,
  ConditionIIFails,
  NotALocale,
  NotEverywhereDefined,
  NotUnivalued,
  Mismatch,
  ShapeMismatch,
  NotBijection,
  TriangularFails,
  NotDualizable,
  GluingFails,
  NotDense,
  Inconsistent,
  NoProducts,
  NoDuals,
  NotAFunction,
  NotACone,
  NotAGroupoid,
  NotAnAction,
  AnchorMismatch,
  SizeBound,
  NoIsomorphismFound,
  RelationViolated,
  CapExceeded,
  ParseError,
  UnresolvedReference,
  ValidationError,
};

inline std::string_view to_string(Errc c) {
  switch (c) {
    case Errc::NotAPartialOrder: return "NotAPartialOrder";
    case Errc::MissingJoin: return "MissingJoin";
    case Errc::DomainMismatch: return "DomainMismatch";
    case Errc::NotAModule: return "NotAModule";
    case Errc::ConditionIFails: return "ConditionIFails";
    case Errc::ConditionIIFails: return "ConditionIIFails";
    case Errc::NotALocale: return "NotALocale";
    case Errc::NotEverywhereDefined: return "NotEverywhereDefined";
    case Errc::NotUnivalued: return "NotUnivalued";
    case Errc::Mismatch: return "Mismatch";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NotBijection: return "NotBijection";
    case Errc::TriangularFails: return "TriangularFails";
    case Errc::NotDualizable: return "NotDualizable";
    case Errc::GluingFails: return "GluingFails";
    case Errc::NotDense: return "NotDense";
    case Errc::Inconsistent: return "Inconsistent";
    case Errc::NoProducts: return "NoProducts";
    case Errc::NoDuals: return "NoDuals";
    case Errc::NotAFunction: return "NotAFunction";
    case Errc::NotACone: return "NotACone";
    case Errc::NotAGroupoid: return "NotAGroupoid";
    case Errc::NotAnAction: return "NotAnAction";
    case Errc::AnchorMismatch: return "AnchorMismatch";
    case Errc::SizeBound: return "SizeBound";
    case Errc::NoIsomorphismFound: return "NoIsomorphismFound";
    case Errc::RelationViolated: return "RelationViolated";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::ParseError: return "ParseError";
    case Errc::UnresolvedReference: return "UnresolvedReference";
    case Errc::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

// `check` is a stable identifier of the violated law, `witness` a rendering
// of the offending elements.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string check, std::string witness = {})
      : std::runtime_error(std::string(to_string(code)) + " [" + check + "]" +
                           (witness.empty() ? "" : ": " + witness)),
        code_(code),
        check_(std::move(check)),
        witness_(std::move(witness)) {}

  Errc code() const { return code_; }
  const std::string& check() const { return check_; }
  const std::string& witness() const { return witness_; }

 private:
  Errc code_;
  std::string check_;
  std::string witness_;
};

struct Verdict {
  bool ok = true;
  std::string check;
  std::string witness;

  static Verdict pass() { return {}; }
  static Verdict fail(std::string check, std::string witness) {
    return {false, std::move(check), std::move(witness)};
  }
  explicit operator bool() const { return ok; }
};

// First failing verdict wins.
inline Verdict both(Verdict a, Verdict b) { return a.ok ? b : a; }

inline Bits make_bits(std::size_t n, std::initializer_list<std::size_t> on = {}) {
  Bits b(n);
  for (auto i : on) b.set(i);
  return b;
}

template <class F>
void for_each_bit(const Bits& b, F&& f) {
  for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) f(i);
}

struct BitsHash {
  std::size_t operator()(const Bits& b) const { return boost::hash_value(b); }
};

}  // namespace sltk
