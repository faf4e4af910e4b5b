#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "modbasis/basis.hpp"
#include "modbasis/error.hpp"
#include "modbasis/leveldata.hpp"

namespace modbasis {
namespace {

using nlohmann::json;

constexpr int kCacheFormat = 1;

json rationals_to_json(std::span<const BigRational> values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

std::vector<BigRational> rationals_from_json(const json& j) {
  std::vector<BigRational> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(parse_rational(v.get<std::string>()));
  return out;
}

std::string file_name(const LadderKey& key) {
  std::ostringstream name;
  name << "basis-N" << key.level << "-k" << key.weight << '-' << to_string(key.space) << ".json";
  return name.str();
}

// Grow in steps so that a sweep over increasing indices does not rebuild the
// ladder once per index.
Exponent grown(Exponent requested, Exponent current, Exponent floor_value) {
  if (requested <= current) return current;
  const Exponent span = std::max<Exponent>(current - floor_value, 0);
  return std::max(requested, current + span / 2 + 8);
}

}  // namespace

std::string ladder_to_json(const Ladder& ladder) {
  json doc;
  doc["format"] = kCacheFormat;
  doc["fixture_version"] = get_level(ladder.level()).fixture_version;
  doc["level"] = ladder.level();
  doc["weight"] = ladder.weight();
  doc["space"] = to_string(ladder.space());
  doc["gap"] = ladder.gap();
  doc["n_max"] = ladder.n_max();
  doc["first_poly"] = rationals_to_json(ladder.haupt_poly(ladder.m_min()));
  json elements = json::array();
  for (Exponent m = ladder.m_min(); m <= ladder.m_max(); ++m) {
    const QSeries& s = ladder.expansion(m);
    json e;
    e["index"] = m;
    e["valuation"] = s.valuation();
    e["prec"] = s.prec();
    e["coeffs"] = rationals_to_json(s.stored());
    e["reduction"] = rationals_to_json(ladder.reductions_[static_cast<std::size_t>(m - ladder.m_min())]);
    elements.push_back(std::move(e));
  }
  doc["elements"] = std::move(elements);
  return doc.dump();
}

Ladder ladder_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<int>() != kCacheFormat) throw ParseError("unsupported cache format");
    Ladder L;
    L.level_ = doc.at("level").get<int>();
    L.weight_ = doc.at("weight").get<int>();
    L.space_ = parse_space(doc.at("space").get<std::string>());
    L.gap_ = doc.at("gap").get<Exponent>();
    L.n_max_ = doc.at("n_max").get<Exponent>();
    L.first_poly_ = rationals_from_json(doc.at("first_poly"));
    Exponent expected = -L.gap_;
    for (const auto& e : doc.at("elements")) {
      if (e.at("index").get<Exponent>() != expected++) throw ParseError("cache indices not contiguous");
      L.elements_.push_back(QSeries::from_coefficients(e.at("valuation").get<Exponent>(),
                                                       rationals_from_json(e.at("coeffs")),
                                                       e.at("prec").get<Exponent>()));
      L.reductions_.push_back(rationals_from_json(e.at("reduction")));
    }
    if (L.elements_.empty()) throw ParseError("cache file has no elements");
    return L;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed cache file: ") + e.what());
  }
}

BasisCache::BasisCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

BasisCache& BasisCache::global() {
  static BasisCache cache;
  return cache;
}

BasisCache::Slot& BasisCache::slot(const LadderKey& key) {
  std::lock_guard lock(mutex_);
  auto& s = slots_[key];
  if (!s) s = std::make_unique<Slot>();
  return *s;
}

std::shared_ptr<const Ladder> BasisCache::ladder(int level, int k, Space space, Exponent m_max,
                                                 Exponent n_max) {
  Slot& s = slot({level, k, space});
  std::lock_guard build_lock(s.build);
  std::shared_ptr<const Ladder> current;
  {
    std::lock_guard lock(mutex_);
    current = s.ladder;
  }
  if (current && current->covers(m_max, n_max)) return current;
  Exponent want_m = m_max;
  Exponent want_n = n_max;
  if (current) {
    want_m = grown(m_max, current->m_max(), current->m_min());
    want_n = grown(n_max, current->n_max(), 0);
  }
  auto built = std::make_shared<const Ladder>(Ladder::build(level, k, space, want_m, want_n));
  std::lock_guard lock(mutex_);
  s.ladder = built;
  s.dirty = true;
  return built;
}

void BasisCache::save() {
  if (!dir_) return;
  std::filesystem::create_directories(*dir_);
  std::vector<std::pair<LadderKey, std::shared_ptr<const Ladder>>> snapshot;
  {
    std::lock_guard lock(mutex_);
    for (const auto& [key, s] : slots_) {
      if (s->ladder && s->dirty) {
        snapshot.emplace_back(key, s->ladder);
        s->dirty = false;
      }
    }
  }
  for (const auto& [key, ladder] : snapshot) {
    const auto path = *dir_ / file_name(key);
    const auto tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write cache file " + tmp);
      out << ladder_to_json(*ladder);
    }
    std::filesystem::rename(tmp, path);
  }
}

std::size_t BasisCache::load() {
  if (!dir_ || !std::filesystem::is_directory(*dir_)) return 0;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(*dir_)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("basis-N", 0) == 0 && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::size_t loaded = 0;
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    const std::string body = text.str();
    Ladder L;
    try {
      const json head = json::parse(body);
      if (head.value("format", 0) != kCacheFormat) continue;
      const int level = head.at("level").get<int>();
      if (head.value("fixture_version", -1) != get_level(level).fixture_version) continue;
      L = ladder_from_json(body);
    } catch (const std::exception&) {
      continue;  // unreadable or stale entries are rebuilt on demand
    }
    const LadderKey key{L.level(), L.weight(), L.space()};
    Slot& s = slot(key);
    std::lock_guard build_lock(s.build);
    std::lock_guard lock(mutex_);
    if (!s.ladder || (L.m_max() >= s.ladder->m_max() && L.n_max() >= s.ladder->n_max())) {
      s.ladder = std::make_shared<const Ladder>(std::move(L));
      s.dirty = false;
      ++loaded;
    }
  }
  return loaded;
}

void BasisCache::clear() {
  std::lock_guard lock(mutex_);
  for (auto& [key, s] : slots_) s->ladder.reset();
}

std::vector<LadderKey> BasisCache::keys() const {
  std::lock_guard lock(mutex_);
  std::vector<LadderKey> out;
  for (const auto& [key, s] : slots_) {
    if (s->ladder) out.push_back(key);
  }
  return out;
}

}  // namespace modbasis
