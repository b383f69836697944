#include "puiseux/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "puiseux/chains.hpp"
#include "puiseux/decomposition.hpp"
#include "puiseux/errors.hpp"
#include "puiseux/factorization.hpp"

namespace puiseux::cli {

using nlohmann::json;

namespace {

constexpr const char* kVerbNames[] = {"classify", "generators", "decompose",
                                      "member",   "divides",    "factorize",
                                      "lengths",  "zlength",    "atoms",
                                      "chain"};
constexpr const char* kVerbHelp[] = {
    "structural flags of the monoid",
    "list generators with their controlling primes",
    "atomic decomposition q = eta + sum zeta_i a_i",
    "membership with a certificate or an obstruction",
    "whether r divides q",
    "factorizations up to a length bound",
    "lengths of factorizations up to --up-to",
    "factorizations of one exact length",
    "atom verdicts for listed generators",
    "non-stabilizing chain of principal ideals"};

// ---------------------------------------------------------------------------
// Descriptor documents

std::string field_error(const std::string& field, const std::string& what) {
  return "descriptor field '" + field + "': " + what;
}

Integer json_integer(const json& v, const std::string& field) {
  if (v.is_number_unsigned()) return Integer(std::to_string(v.get<std::uint64_t>()));
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0)
      throw std::invalid_argument(field_error(field, "must be nonnegative"));
    return Integer(std::to_string(v.get<std::int64_t>()));
  }
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (s.empty() || !std::all_of(s.begin(), s.end(),
                                  [](char c) { return c >= '0' && c <= '9'; }))
      throw std::invalid_argument(field_error(field, "not a decimal integer"));
    return Integer(s);
  }
  throw std::invalid_argument(field_error(field, "expected an integer"));
}

unsigned long json_ulong(const json& v, const std::string& field) {
  Integer n = json_integer(v, field);
  if (!n.fits_ulong_p())
    throw std::invalid_argument(field_error(field, "out of range"));
  return n.get_ui();
}

std::vector<Integer> json_integer_list(const json& v, const std::string& field) {
  if (!v.is_array())
    throw std::invalid_argument(field_error(field, "expected an array"));
  std::vector<Integer> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(json_integer(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

Rational json_rational(const json& v, const std::string& field) {
  if (v.is_string()) {
    try {
      return parse_rational(v.get_ref<const std::string&>());
    } catch (const std::exception& e) {
      throw std::invalid_argument(field_error(field, e.what()));
    }
  }
  return Rational(json_integer(v, field));
}

json integer_json(const Integer& n) {
  if (n.fits_ulong_p()) return json(static_cast<std::uint64_t>(n.get_ui()));
  return json(n.get_str());
}

const std::set<std::string>& allowed_fields(Family f) {
  static const std::map<Family, std::set<std::string>> table = {
      {Family::prime_reciprocal, {"primes", "scale"}},
      {Family::grams, {"base", "primes", "scale"}},
      {Family::gap, {"ell", "primes", "scale"}},
      {Family::geometric, {"q", "include_unit", "scale"}},
      {Family::power_reciprocal, {"base", "scale"}},
      {Family::mixed_5_2, {"k", "primes", "scale"}},
      {Family::custom, {"numerators", "denominators"}},
  };
  return table.at(f);
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

// ---------------------------------------------------------------------------
// JSON fragments

json coefficients_json(const Coefficients& c) {
  json out = json::array();
  for (const auto& [i, a] : c) out.push_back(json::array({i, a.get_str()}));
  return out;
}

std::string render_sum(const MonoidDescriptor& desc, const Coefficients& c) {
  std::vector<std::string> terms;
  for (const auto& [i, a] : c)
    terms.push_back(a.get_str() + "·(" + generator_value(desc, i).to_string() + ")");
  return terms.empty() ? "0" : join(terms, " + ");
}

std::string mpq_string(const mpq_class& q) { return q.get_str(); }

json obstruction_json(const NotMember& nm) {
  json o = {{"kind", to_string(nm.kind)},
            {"subject", mpq_string(nm.subject)},
            {"prime", nm.prime ? json(nm.prime->get_str()) : json(nullptr)},
            {"valuation_bound", nm.kind == Obstruction::valuation
                                    ? json(nm.valuation_bound)
                                    : json(nullptr)},
            {"residues", coefficients_json(nm.residues)},
            {"remainder", mpq_string(nm.remainder)},
            {"detail", nm.detail}};
  return o;
}

json completeness_json(const CompletenessInfo& c) {
  return {{"kind", to_string(c.kind)},
          {"max_length", c.max_length ? json(*c.max_length) : json(nullptr)},
          {"max_index", c.max_index ? json(*c.max_index) : json(nullptr)},
          {"note", c.note}};
}

json factorization_json(const MonoidDescriptor& desc, const Factorization& f) {
  return {{"exponents", coefficients_json(f.exponents)},
          {"length", f.length.get_str()},
          {"rendered", render_sum(desc, f.exponents)}};
}

json decomposition_json(const MonoidDescriptor& desc,
                        const AtomicDecomposition& d) {
  std::string rendered = d.value.to_string() + " = " + d.eta.get_str();
  if (!d.zeta.empty()) rendered += " + " + render_sum(desc, d.zeta);
  return {{"value", d.value.to_string()},
          {"eta", d.eta.get_str()},
          {"zeta", coefficients_json(d.zeta)},
          {"rendered", rendered}};
}

json verdict_json(const MembershipVerdict& v, Status& status) {
  if (const auto* m = std::get_if<Member>(&v)) {
    status = Status::ok;
    return {{"verdict", "member"},
            {"method", m->method},
            {"certificate", coefficients_json(m->coefficients)}};
  }
  if (const auto* nm = std::get_if<NotMember>(&v)) {
    status = Status::not_member;
    return {{"verdict", "not_member"}, {"obstruction", obstruction_json(*nm)}};
  }
  status = Status::unknown;
  return {{"verdict", "unknown"}, {"detail", std::get<Unknown>(v).detail}};
}

json flag_json(const Flag& f) {
  return {{"value", to_string(f.value)}, {"why", f.why}};
}

// ---------------------------------------------------------------------------
// Verbs

Rational value_at(const Command& cmd, std::size_t i) {
  try {
    return parse_rational(cmd.values.at(i));
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("missing rational argument");
  } catch (const std::invalid_argument& e) {
    throw;
  } catch (const std::exception& e) {
    throw std::invalid_argument("malformed rational literal '" +
                                cmd.values.at(i) + "': " + e.what());
  }
}

void expect_values(const Command& cmd, std::size_t n) {
  if (cmd.values.size() != n)
    throw std::invalid_argument(to_string(cmd.verb) + " takes " +
                                std::to_string(n) + " positional argument" +
                                (n == 1 ? "" : "s") + ", got " +
                                std::to_string(cmd.values.size()));
}

std::vector<Index> listed_indices(const MonoidDescriptor& desc,
                                  const Command& cmd) {
  if (cmd.index) {
    if (!desc.has_index(*cmd.index))
      throw std::out_of_range("index " + std::to_string(*cmd.index) +
                              " out of range");
    return {*cmd.index};
  }
  std::vector<Index> out;
  for (Index n = desc.first_index(); out.size() < cmd.count && desc.has_index(n); ++n)
    out.push_back(n);
  return out;
}

SearchBounds search_bounds(const Bounds& b) {
  return {b.max_index, b.max_coeff, b.max_nodes};
}

void run_verb(const Command& cmd, const MonoidDescriptor& desc, Report& r) {
  const SearchBounds sb = search_bounds(cmd.bounds);
  switch (cmd.verb) {
    case Verb::classify: {
      expect_values(cmd, 0);
      ClassificationReport c = classify(desc);
      r.result = {{"flags",
                   {{"reciprocal", flag_json(c.reciprocal)},
                    {"weak_reciprocal", flag_json(c.weak_reciprocal)},
                    {"almost_reciprocal", flag_json(c.almost_reciprocal)},
                    {"strongly_bounded", flag_json(c.strongly_bounded)},
                    {"bounded", flag_json(c.bounded)},
                    {"atomic", flag_json(c.atomic)},
                    {"uad", flag_json(c.uad)}}},
                  {"implication_chain_holds", c.satisfies_implication_chain()}};
      if (desc.is_finite())
        r.notes.push_back("flags describe the listed generators only");
      return;
    }
    case Verb::generators: {
      expect_values(cmd, 0);
      json gens = json::array();
      for (Index n : listed_indices(desc, cmd)) {
        GeneratorTerm t = generator(desc, n);
        gens.push_back({{"index", n},
                        {"value", t.value.to_string()},
                        {"controlling_prime", t.controlling_prime
                                                  ? json(t.controlling_prime->get_str())
                                                  : json(nullptr)}});
      }
      r.result = {{"generators", gens}};
      return;
    }
    case Verb::decompose: {
      expect_values(cmd, 1);
      Rational q = value_at(cmd, 0);
      r.input = {{"q", q.to_string()}};
      DecomposeResult d = atomic_decompose(desc, q);
      if (const auto* nm = std::get_if<NotMember>(&d)) {
        r.status = Status::not_member;
        r.result = {{"obstruction", obstruction_json(*nm)}};
      } else {
        r.result = {{"decomposition",
                     decomposition_json(desc, std::get<AtomicDecomposition>(d))}};
      }
      r.notes.push_back(
          "closed form: pairwise coprime denominators fix each zeta_i modulo d_i");
      return;
    }
    case Verb::member: {
      expect_values(cmd, 1);
      Rational q = value_at(cmd, 0);
      r.input = {{"q", q.to_string()}};
      r.result = verdict_json(member(desc, q, sb), r.status);
      return;
    }
    case Verb::divides: {
      expect_values(cmd, 2);
      Rational a = value_at(cmd, 0);
      Rational b = value_at(cmd, 1);
      r.input = {{"r", a.to_string()}, {"q", b.to_string()}};
      r.result = verdict_json(divides(desc, a, b, sb), r.status);
      return;
    }
    case Verb::factorize: {
      expect_values(cmd, 1);
      Rational q = value_at(cmd, 0);
      r.input = {{"q", q.to_string()}};
      FactorizationSet s =
          enumerate_factorizations(desc, q, cmd.bounds.max_length, sb);
      json items = json::array();
      for (const auto& f : s.items) items.push_back(factorization_json(desc, f));
      r.result = {{"factorizations", items},
                  {"completeness", completeness_json(s.completeness)}};
      if (s.completeness.kind == Completeness::unknown) r.status = Status::unknown;
      return;
    }
    case Verb::lengths: {
      expect_values(cmd, 1);
      Rational q = value_at(cmd, 0);
      unsigned long up_to = cmd.up_to.value_or(cmd.bounds.max_length);
      if (up_to == 0) throw std::invalid_argument("--up-to must be positive");
      r.input = {{"q", q.to_string()}, {"up_to", up_to}};
      LengthSet s = length_set(desc, q, up_to, cmd.bounds.max_nodes);
      json lengths = json::array();
      for (const auto& l : s.lengths) lengths.push_back(l.get_str());
      json witnesses = json::array();
      for (const auto& f : s.witnesses) witnesses.push_back(factorization_json(desc, f));
      r.result = {{"lengths", lengths},
                  {"completeness", completeness_json(s.completeness)},
                  {"witnesses", witnesses}};
      if (s.completeness.kind == Completeness::unknown) r.status = Status::unknown;
      return;
    }
    case Verb::zlength: {
      expect_values(cmd, 1);
      if (!cmd.length || *cmd.length == 0)
        throw std::invalid_argument("zlength needs a positive length");
      Rational q = value_at(cmd, 0);
      r.input = {{"q", q.to_string()}, {"length", *cmd.length}};
      FactorizationSet s =
          factorizations_of_length(desc, q, *cmd.length, cmd.bounds.max_nodes);
      json items = json::array();
      for (const auto& f : s.items) items.push_back(factorization_json(desc, f));
      r.result = {{"factorizations", items},
                  {"completeness", completeness_json(s.completeness)}};
      if (s.completeness.kind == Completeness::unknown) r.status = Status::unknown;
      return;
    }
    case Verb::atoms: {
      expect_values(cmd, 0);
      json atoms = json::array();
      for (Index n : listed_indices(desc, cmd)) {
        AtomCertificate c = is_atom(desc, n, sb);
        atoms.push_back({{"index", n},
                         {"value", generator_value(desc, n).to_string()},
                         {"verdict", to_string(c.verdict)},
                         {"reason", c.reason},
                         {"witness", c.witness ? factorization_json(desc, *c.witness)
                                               : json(nullptr)}});
        if (c.verdict == AtomCertificate::Verdict::unknown) r.status = Status::unknown;
      }
      r.result = {{"atoms", atoms}};
      return;
    }
    case Verb::chain: {
      expect_values(cmd, 0);
      ChainWitness w;
      if (desc.family() == Family::grams)
        w = grams_chain(desc, cmd.bounds.max_steps);
      else if (desc.family() == Family::gap)
        w = gap_chain(desc, cmd.bounds.max_steps);
      else
        throw UnsupportedError("non-stabilizing chains are built for grams and "
                               "gap families only");
      ChainCheck check = verify_chain(desc, w);
      json elements = json::array();
      for (const auto& e : w.elements) elements.push_back(e.to_string());
      json steps = json::array();
      for (std::size_t k = 0; k < w.steps.size(); ++k) {
        Rational diff = subtract(w.elements[k], w.elements[k + 1]).accept();
        steps.push_back({{"step", k + 1},
                         {"element", w.elements[k].to_string()},
                         {"next", w.elements[k + 1].to_string()},
                         {"difference", diff.to_string()},
                         {"certificate", coefficients_json(w.steps[k].certificate)},
                         {"rendered", render_sum(desc, w.steps[k].certificate)},
                         {"ok", check.steps[k].ok}});
      }
      r.result = {{"elements", elements}, {"steps", steps}, {"verified", check.ok}};
      if (!check.ok) r.status = Status::error;
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// Tables

std::string pad(const std::string& s, std::size_t width) {
  // Width counts code points; "·" is two bytes.
  std::size_t cps = 0;
  for (unsigned char c : s) cps += (c & 0xC0) != 0x80;
  return cps >= width ? s + " " : s + std::string(width - cps, ' ');
}

std::string coeff_pairs(const json& pairs) {
  std::vector<std::string> parts;
  for (const auto& p : pairs)
    parts.push_back("[" + std::to_string(p[0].get<Index>()) + ", " +
                    p[1].get<std::string>() + "]");
  return "{" + join(parts, ", ") + "}";
}

std::string completeness_text(const json& c) {
  std::string s = c["kind"].get<std::string>();
  std::vector<std::string> bounds;
  if (!c["max_length"].is_null())
    bounds.push_back("max_length=" + std::to_string(c["max_length"].get<unsigned long>()));
  if (!c["max_index"].is_null())
    bounds.push_back("max_index=" + std::to_string(c["max_index"].get<Index>()));
  if (!bounds.empty()) s += " (" + join(bounds, ", ") + ")";
  return s;
}

void table_verdict(std::ostream& os, const std::string& subject, const json& r) {
  const std::string verdict = r["verdict"].get<std::string>();
  os << subject << ": " << verdict << "\n";
  if (verdict == "member") {
    os << "method: " << r["method"].get<std::string>() << "\n";
    os << "certificate: " << coeff_pairs(r["certificate"]) << "\n";
  } else if (verdict == "not_member") {
    const json& o = r["obstruction"];
    os << "obstruction: " << o["kind"].get<std::string>() << "\n";
    os << "detail: " << o["detail"].get<std::string>() << "\n";
  } else {
    os << "detail: " << r["detail"].get<std::string>() << "\n";
  }
}

void table_factorizations(std::ostream& os, const json& r) {
  const json& items = r["factorizations"];
  os << items.size() << " factorization" << (items.size() == 1 ? "" : "s")
     << ", " << completeness_text(r["completeness"]) << "\n";
  if (items.empty()) return;
  os << pad("length", 8) << "factorization\n";
  for (const auto& f : items)
    os << pad(f["length"].get<std::string>(), 8) << f["rendered"].get<std::string>()
       << "\n";
}

}  // namespace

std::string to_string(Verb v) { return kVerbNames[static_cast<int>(v)]; }

std::optional<Verb> verb_from_string(std::string_view name) {
  for (int i = 0; i < 10; ++i)
    if (name == kVerbNames[i]) return static_cast<Verb>(i);
  return std::nullopt;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::not_member: return "not_member";
    case Status::unknown: return "unknown";
    case Status::unsupported: return "unsupported";
    case Status::error: return "error";
  }
  return "?";
}

int exit_code(Status s) {
  switch (s) {
    case Status::ok: return 0;
    case Status::not_member:
    case Status::unknown: return 2;
    case Status::unsupported: return 3;
    case Status::error: return 1;
  }
  return 1;
}

MonoidDescriptor parse_descriptor(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("descriptor is not valid JSON: ") +
                                e.what());
  }
  return parse_descriptor(doc);
}

MonoidDescriptor parse_descriptor(const json& doc) {
  if (!doc.is_object())
    throw std::invalid_argument("descriptor must be a JSON object");
  if (!doc.contains("family"))
    throw std::invalid_argument(field_error("family", "missing"));
  if (!doc["family"].is_string())
    throw std::invalid_argument(field_error("family", "expected a string"));
  const std::string name = doc["family"].get<std::string>();
  auto fam = family_from_string(name);
  if (!fam)
    throw std::invalid_argument(field_error("family", "unknown family '" + name + "'"));
  static const std::set<std::string> known = {
      "family", "base", "ell", "q", "include_unit", "k",
      "numerators", "denominators", "primes", "scale"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key))
      throw std::invalid_argument(field_error(key, "unknown field"));
    if (key != "family" && !allowed_fields(*fam).count(key))
      throw std::invalid_argument(
          field_error(key, "does not apply to family " + name));
  }

  std::vector<unsigned long> primes;
  if (doc.contains("primes"))
    for (const auto& p : json_integer_list(doc["primes"], "primes")) {
      if (!p.fits_ulong_p())
        throw std::invalid_argument(field_error("primes", "prime too large"));
      primes.push_back(p.get_ui());
    }
  auto ulong_or = [&](const char* key, unsigned long dflt) {
    return doc.contains(key) ? json_ulong(doc[key], key) : dflt;
  };

  std::optional<MonoidDescriptor> desc;
  try {
    switch (*fam) {
      case Family::prime_reciprocal:
        desc = MonoidDescriptor::prime_reciprocal(primes);
        break;
      case Family::grams:
        desc = MonoidDescriptor::grams(ulong_or("base", 2), primes);
        break;
      case Family::gap:
        if (!doc.contains("ell")) throw std::invalid_argument("missing");
        desc = MonoidDescriptor::gap(json_ulong(doc["ell"], "ell"), primes);
        break;
      case Family::geometric: {
        if (!doc.contains("q")) throw std::invalid_argument(field_error("q", "missing"));
        bool unit = true;
        if (doc.contains("include_unit")) {
          if (!doc["include_unit"].is_boolean())
            throw std::invalid_argument(field_error("include_unit", "expected a boolean"));
          unit = doc["include_unit"].get<bool>();
        }
        desc = MonoidDescriptor::geometric(json_rational(doc["q"], "q"), unit);
        break;
      }
      case Family::power_reciprocal:
        desc = MonoidDescriptor::power_reciprocal(ulong_or("base", 2));
        break;
      case Family::mixed_5_2:
        desc = MonoidDescriptor::mixed_5_2(ulong_or("k", 1), primes);
        break;
      case Family::custom: {
        for (const char* key : {"numerators", "denominators"})
          if (!doc.contains(key))
            throw std::invalid_argument(field_error(key, "missing"));
        auto nums = json_integer_list(doc["numerators"], "numerators");
        auto dens = json_integer_list(doc["denominators"], "denominators");
        if (nums.size() != dens.size())
          throw std::invalid_argument(
              "descriptor fields 'numerators' and 'denominators' differ in "
              "length (" + std::to_string(nums.size()) + " vs " +
              std::to_string(dens.size()) + ")");
        if (nums.empty())
          throw std::invalid_argument(field_error("numerators", "empty list"));
        std::vector<Rational> terms;
        for (std::size_t i = 0; i < nums.size(); ++i) {
          std::string at = "[" + std::to_string(i) + "]";
          if (nums[i] == 0)
            throw std::invalid_argument(field_error("numerators" + at, "must be positive"));
          if (dens[i] == 0)
            throw std::invalid_argument(field_error("denominators" + at, "must be positive"));
          if (gcd(nums[i], dens[i]) != 1)
            throw std::invalid_argument(
                field_error("numerators" + at, nums[i].get_str() + "/" +
                                                   dens[i].get_str() +
                                                   " is not in lowest terms"));
          terms.push_back(Rational(nums[i], dens[i]));
        }
        desc = MonoidDescriptor::custom(std::move(terms));
        break;
      }
    }
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    if (msg == "missing") msg = field_error("ell", "missing");
    if (msg.rfind("descriptor", 0) != 0) msg = "descriptor: " + msg;
    throw std::invalid_argument(msg);
  }
  if (doc.contains("scale")) {
    Rational s = json_rational(doc["scale"], "scale");
    if (s.is_zero()) throw std::invalid_argument(field_error("scale", "must be positive"));
    desc = scale(*desc, s);
  }
  return *desc;
}

json descriptor_to_json(const MonoidDescriptor& desc) {
  json out = {{"family", to_string(desc.family())}};
  std::visit(
      [&](const auto& rule) {
        using T = std::decay_t<decltype(rule)>;
        if constexpr (std::is_same_v<T, family::Grams> ||
                      std::is_same_v<T, family::PowerReciprocal>) {
          out["base"] = rule.base;
        } else if constexpr (std::is_same_v<T, family::Gap>) {
          out["ell"] = rule.ell;
        } else if constexpr (std::is_same_v<T, family::Geometric>) {
          out["q"] = rule.ratio.to_string();
          out["include_unit"] = rule.include_unit;
        } else if constexpr (std::is_same_v<T, family::Mixed52>) {
          out["k"] = rule.k;
        } else if constexpr (std::is_same_v<T, family::Custom>) {
          json nums = json::array(), dens = json::array();
          for (const auto& t : rule.terms) {
            nums.push_back(integer_json(t.num()));
            dens.push_back(integer_json(t.den()));
          }
          out["numerators"] = nums;
          out["denominators"] = dens;
        }
      },
      desc.rule());
  if (desc.primes() && !desc.primes()->prefix().empty())
    out["primes"] = desc.primes()->prefix();
  if (desc.scale() != Rational(1)) out["scale"] = desc.scale().to_string();
  return out;
}

Report run(const Command& cmd) {
  Report r;
  r.verb = cmd.verb;
  r.bounds = cmd.bounds;
  try {
    const Bounds& b = cmd.bounds;
    if (b.max_length == 0 || b.max_index == 0 || b.max_steps == 0 ||
        b.max_coeff <= 0 || b.max_nodes == 0)
      throw std::invalid_argument("bounds must be positive");
    if (!cmd.descriptor) throw std::invalid_argument("missing descriptor");
    r.descriptor = descriptor_to_json(*cmd.descriptor);
    run_verb(cmd, *cmd.descriptor, r);
  } catch (const UnsupportedError& e) {
    r.status = Status::unsupported;
    r.error = e.what();
    r.result = json::object();
  } catch (const std::exception& e) {
    r.status = Status::error;
    r.error = e.what();
    r.result = json::object();
  }
  return r;
}

json to_json(const Report& report) {
  json out = {
      {"verb", to_string(report.verb)},
      {"status", to_string(report.status)},
      {"descriptor", report.descriptor.is_null() ? json(nullptr) : report.descriptor},
      {"input", report.input},
      {"bounds",
       {{"max_length", report.bounds.max_length},
        {"max_index", report.bounds.max_index},
        {"max_steps", report.bounds.max_steps},
        {"max_coeff", report.bounds.max_coeff.get_str()},
        {"max_nodes", report.bounds.max_nodes}}},
      {"result", report.result},
      {"notes", report.notes},
      {"error", report.error.empty() ? json(nullptr) : json(report.error)}};
  return out;
}

std::string render_json(const Report& report) {
  return to_json(report).dump(2) + "\n";
}

std::string render_table(const Report& report) {
  std::ostringstream os;
  const json& r = report.result;
  if (report.status == Status::error || report.status == Status::unsupported) {
    os << to_string(report.status) << ": " << report.error << "\n";
  } else {
    switch (report.verb) {
      case Verb::classify: {
        os << pad("flag", 19) << pad("value", 9) << "justification\n";
        for (const char* key : {"reciprocal", "weak_reciprocal", "almost_reciprocal",
                                "strongly_bounded", "bounded", "atomic", "uad"})
          os << pad(key, 19) << pad(r["flags"][key]["value"].get<std::string>(), 9)
             << r["flags"][key]["why"].get<std::string>() << "\n";
        break;
      }
      case Verb::generators:
        os << pad("index", 7) << pad("value", 24) << "controlling prime\n";
        for (const auto& g : r["generators"])
          os << pad(std::to_string(g["index"].get<Index>()), 7)
             << pad(g["value"].get<std::string>(), 24)
             << (g["controlling_prime"].is_null()
                     ? std::string("-")
                     : g["controlling_prime"].get<std::string>())
             << "\n";
        break;
      case Verb::decompose:
        if (r.contains("decomposition")) {
          os << r["decomposition"]["rendered"].get<std::string>() << "\n";
        } else {
          os << report.input["q"].get<std::string>() << ": not_member\n"
             << "obstruction: " << r["obstruction"]["kind"].get<std::string>() << "\n"
             << "detail: " << r["obstruction"]["detail"].get<std::string>() << "\n";
        }
        break;
      case Verb::member:
        table_verdict(os, report.input["q"].get<std::string>(), r);
        break;
      case Verb::divides:
        table_verdict(os,
                      report.input["r"].get<std::string>() + " | " +
                          report.input["q"].get<std::string>(),
                      r);
        break;
      case Verb::factorize:
      case Verb::zlength:
        table_factorizations(os, r);
        break;
      case Verb::lengths: {
        std::vector<std::string> ls;
        for (const auto& l : r["lengths"]) ls.push_back(l.get<std::string>());
        os << "L(" << report.input["q"].get<std::string>() << ") in [1, "
           << report.input["up_to"].get<unsigned long>() << "] = {" << join(ls, ", ")
           << "}\n";
        os << "completeness: " << completeness_text(r["completeness"]) << "\n";
        for (const auto& w : r["witnesses"])
          os << pad(w["length"].get<std::string>(), 8) << w["rendered"].get<std::string>()
             << "\n";
        break;
      }
      case Verb::atoms:
        os << pad("index", 7) << pad("value", 16) << pad("verdict", 10) << "reason\n";
        for (const auto& a : r["atoms"]) {
          std::string reason = a["reason"].get<std::string>();
          if (!a["witness"].is_null())
            reason += ": " + a["witness"]["rendered"].get<std::string>();
          os << pad(std::to_string(a["index"].get<Index>()), 7)
             << pad(a["value"].get<std::string>(), 16)
             << pad(a["verdict"].get<std::string>(), 10) << reason << "\n";
        }
        break;
      case Verb::chain:
        os << pad("step", 6) << pad("element", 16) << pad("difference", 16)
           << "certificate\n";
        for (const auto& s : r["steps"])
          os << pad(std::to_string(s["step"].get<std::size_t>()), 6)
             << pad(s["element"].get<std::string>(), 16)
             << pad(s["difference"].get<std::string>(), 16)
             << s["rendered"].get<std::string>() << "\n";
        os << "last element: " << r["elements"].back().get<std::string>() << "\n";
        os << "verified: " << (r["verified"].get<bool>() ? "yes" : "no") << "\n";
        break;
    }
  }
  for (const auto& n : report.notes) os << "note: " << n << "\n";
  os << "bounds: max_length=" << report.bounds.max_length
     << " max_index=" << report.bounds.max_index
     << " max_steps=" << report.bounds.max_steps << "\n";
  return os.str();
}

Invocation invoke(const std::vector<std::string>& args) {
  CLI::App app{"Exact computations in Puiseux monoids", "puiseux"};
  app.require_subcommand(1);

  std::string descriptor_text, descriptor_file;
  bool json_mode = false;
  long long max_length = 20, max_index = 50, max_steps = 16, max_nodes = 2'000'000;
  std::string max_coeff = "1000000";
  std::optional<std::string> base, ell, q, include_unit, k, primes, scale_text;
  std::vector<std::string> values;
  long long up_to = 0, count = 10, index = -1;

  for (std::size_t v = 0; v < std::size(kVerbNames); ++v) {
    const char* name = kVerbNames[v];
    CLI::App* sub = app.add_subcommand(name, kVerbHelp[v]);
    sub->add_option("-d,--descriptor", descriptor_text,
                    "family name (with family flags) or a JSON descriptor");
    sub->add_option("-f,--file", descriptor_file, "JSON descriptor file");
    sub->add_flag("--json", json_mode, "machine-readable report");
    sub->add_option("--max-length", max_length)->capture_default_str();
    sub->add_option("--max-index", max_index)->capture_default_str();
    sub->add_option("--max-steps", max_steps)->capture_default_str();
    sub->add_option("--max-coeff", max_coeff)->capture_default_str();
    sub->add_option("--max-nodes", max_nodes)->capture_default_str();
    sub->add_option("--base", base);
    sub->add_option("--ell", ell);
    sub->add_option("--q", q);
    sub->add_option("--include-unit", include_unit, "true or false");
    sub->add_option("--k", k);
    sub->add_option("--primes", primes, "comma-separated prime override");
    sub->add_option("--scale", scale_text);
    std::string verb = name;
    if (verb == "lengths") sub->add_option("--up-to", up_to);
    if (verb == "generators" || verb == "atoms") sub->add_option("--count", count);
    if (verb == "atoms") sub->add_option("--index", index);
    if (verb == "decompose" || verb == "member" || verb == "factorize" ||
        verb == "lengths")
      sub->add_option("value", values, "rational literal a/b")->required();
    if (verb == "divides")
      sub->add_option("values", values, "r q")->required()->expected(2);
    if (verb == "zlength")
      sub->add_option("values", values, "q length")->required()->expected(2);
  }

  Invocation inv;
  std::ostringstream out, err;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    inv.exit_code = code == 0 ? 0 : 1;
    inv.out = out.str();
    inv.err = err.str();
    return inv;
  }

  Command cmd;
  cmd.verb = *verb_from_string(app.get_subcommands().front()->get_name());
  cmd.json = json_mode;
  Report report;
  report.verb = cmd.verb;
  try {
    auto positive = [](long long v, const char* flag) {
      if (v <= 0) throw std::invalid_argument(std::string(flag) + " must be positive");
      return static_cast<unsigned long>(v);
    };
    cmd.bounds.max_length = positive(max_length, "--max-length");
    cmd.bounds.max_index = positive(max_index, "--max-index");
    cmd.bounds.max_steps = positive(max_steps, "--max-steps");
    cmd.bounds.max_nodes = positive(max_nodes, "--max-nodes");
    try {
      cmd.bounds.max_coeff = Integer(max_coeff);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("--max-coeff must be a positive integer");
    }
    if (cmd.bounds.max_coeff <= 0)
      throw std::invalid_argument("--max-coeff must be a positive integer");
    report.bounds = cmd.bounds;

    bool family_flags = base || ell || q || include_unit || k || primes || scale_text;
    if (!descriptor_file.empty()) {
      if (!descriptor_text.empty())
        throw std::invalid_argument("give either -d or -f, not both");
      if (family_flags)
        throw std::invalid_argument("family flags need an inline family name");
      std::ifstream in(descriptor_file);
      if (!in) throw std::invalid_argument("cannot read " + descriptor_file);
      std::stringstream buf;
      buf << in.rdbuf();
      cmd.descriptor = parse_descriptor(std::string_view(buf.str()));
    } else if (descriptor_text.empty()) {
      throw std::invalid_argument("missing descriptor (-d or -f)");
    } else if (descriptor_text.front() == '{') {
      if (family_flags)
        throw std::invalid_argument("family flags need an inline family name");
      cmd.descriptor = parse_descriptor(std::string_view(descriptor_text));
    } else {
      json doc = {{"family", descriptor_text}};
      auto digits = [](const std::string& s, const char* flag) -> json {
        if (s.empty() || !std::all_of(s.begin(), s.end(),
                                      [](char c) { return c >= '0' && c <= '9'; }))
          throw std::invalid_argument(std::string(flag) + " expects an integer");
        return json(s);
      };
      if (base) doc["base"] = digits(*base, "--base");
      if (ell) doc["ell"] = digits(*ell, "--ell");
      if (k) doc["k"] = digits(*k, "--k");
      if (q) doc["q"] = *q;
      if (scale_text) doc["scale"] = *scale_text;
      if (include_unit) {
        if (*include_unit != "true" && *include_unit != "false")
          throw std::invalid_argument("--include-unit expects true or false");
        doc["include_unit"] = *include_unit == "true";
      }
      if (primes) {
        json list = json::array();
        std::stringstream ss(*primes);
        std::string item;
        while (std::getline(ss, item, ',')) list.push_back(digits(item, "--primes"));
        doc["primes"] = list;
      }
      cmd.descriptor = parse_descriptor(doc);
    }

    if (cmd.verb == Verb::zlength) {
      const std::string& l = values.at(1);
      if (l.empty() || !std::all_of(l.begin(), l.end(),
                                    [](char c) { return c >= '0' && c <= '9'; }) ||
          l.size() > 9)
        throw std::invalid_argument("length must be a positive integer");
      cmd.length = std::stoul(l);
      values.pop_back();
    }
    cmd.values = values;
    if (cmd.verb == Verb::lengths && up_to != 0)
      cmd.up_to = positive(up_to, "--up-to");
    if (cmd.verb == Verb::generators || cmd.verb == Verb::atoms)
      cmd.count = positive(count, "--count");
    if (cmd.verb == Verb::atoms && index >= 0) cmd.index = static_cast<Index>(index);
    report = run(cmd);
  } catch (const std::exception& e) {
    report.status = Status::error;
    report.error = e.what();
  }
  inv.exit_code = exit_code(report.status);
  inv.out = cmd.json ? render_json(report) : render_table(report);
  if (!cmd.json && report.status == Status::error) {
    inv.err = inv.out;
    inv.out.clear();
  }
  return inv;
}

}  // namespace puiseux::cli
