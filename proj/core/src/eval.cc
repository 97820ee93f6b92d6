// Copyright 2026 The Maskron Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "maskron/eval.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "maskron/error.h"

namespace maskron {
namespace {

AnnotatedDoc ParseCorpusLine(const std::string& line, std::size_t line_no) {
  auto where = [&] { return "corpus line " + std::to_string(line_no); };
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kParseError, where() + ": not a JSON object");
  }
  auto text = j.find("text");
  auto entities = j.find("entities");
  if (text == j.end() || !text->is_string()) {
    throw Error(ErrorCode::kParseError, where() + ": missing text");
  }
  if (entities != j.end() && !entities->is_array()) {
    throw Error(ErrorCode::kParseError, where() + ": entities must be an array");
  }
  AnnotatedDoc doc;
  doc.text = text->get<std::string>();
  if (entities != j.end()) {
    for (const auto& e : *entities) {
      if (!e.is_object() || !e.contains("start") || !e.contains("end") ||
          !e.contains("type") || !e["start"].is_number_integer() ||
          !e["end"].is_number_integer() || !e["type"].is_string()) {
        throw Error(ErrorCode::kParseError, where() + ": malformed entity");
      }
      std::int64_t start = e["start"].get<std::int64_t>();
      std::int64_t end = e["end"].get<std::int64_t>();
      if (start < 0 || end < 0) throw Error(ErrorCode::kBadSpan, where() + ": negative offset");
      Span span{static_cast<std::size_t>(start), static_cast<std::size_t>(end)};
      try {
        ValidateSpan(doc.text, span);
      } catch (const Error& err) {
        throw Error(ErrorCode::kBadSpan, where() + ": " + err.message());
      }
      PiiType type;
      try {
        type = PiiType::Parse(e["type"].get<std::string>());
      } catch (const Error& err) {
        throw Error(ErrorCode::kParseError, where() + ": " + err.message());
      }
      doc.gold.push_back(GoldEntity{span, type});
    }
  }
  std::sort(doc.gold.begin(), doc.gold.end(),
            [](const GoldEntity& a, const GoldEntity& b) { return a.span < b.span; });
  for (std::size_t i = 1; i < doc.gold.size(); ++i) {
    if (spans_overlap(doc.gold[i - 1].span, doc.gold[i].span)) {
      throw Error(ErrorCode::kBadSpan, where() + ": overlapping gold entities");
    }
  }
  return doc;
}

struct Counts {
  std::uint64_t tp = 0, fp = 0, fn = 0;
};

}  // namespace

std::vector<AnnotatedDoc> load_corpus(std::istream& in) {
  std::vector<AnnotatedDoc> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    docs.push_back(ParseCorpusLine(line, line_no));
  }
  if (in.bad()) throw Error(ErrorCode::kIoError, "corpus read failure");
  return docs;
}

std::vector<AnnotatedDoc> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open corpus " + path.string());
  return load_corpus(in);
}

void WriteCorpus(std::ostream& out, std::span<const AnnotatedDoc> docs) {
  for (const AnnotatedDoc& doc : docs) {
    nlohmann::json entities = nlohmann::json::array();
    for (const GoldEntity& g : doc.gold) {
      entities.push_back({{"start", g.span.start}, {"end", g.span.end}, {"type", g.type.name()}});
    }
    out << nlohmann::json{{"text", doc.text}, {"entities", entities}}.dump() << '\n';
  }
}

TypeScore FinishScore(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
  TypeScore s;
  s.tp = tp;
  s.fp = fp;
  s.fn = fn;
  s.precision = tp + fp == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  s.recall = tp + fn == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  s.f1 = s.precision + s.recall == 0.0
             ? 0.0
             : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

Metrics score(std::span<const std::vector<Detection>> predictions,
              std::span<const AnnotatedDoc> gold, MatchMode mode) {
  if (predictions.size() != gold.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(predictions.size()) + " prediction lists for " +
                    std::to_string(gold.size()) + " documents");
  }
  std::map<PiiType, Counts> counts;
  for (std::size_t d = 0; d < gold.size(); ++d) {
    const auto& entities = gold[d].gold;
    std::vector<const Detection*> preds;
    for (const Detection& p : predictions[d]) preds.push_back(&p);
    std::sort(preds.begin(), preds.end(), [](const Detection* a, const Detection* b) {
      if (a->span != b->span) return a->span < b->span;
      return a->pii_type < b->pii_type;
    });
    std::vector<bool> gold_used(entities.size(), false);
    std::vector<bool> pred_hit(preds.size(), false);

    // Exact pass. Under OVERLAP it runs first too, so an exact hit is never
    // displaced by a looser one and OVERLAP tp >= EXACT tp.
    for (std::size_t i = 0; i < preds.size(); ++i) {
      for (std::size_t g = 0; g < entities.size(); ++g) {
        if (!gold_used[g] && entities[g].span == preds[i]->span &&
            entities[g].type == preds[i]->pii_type) {
          gold_used[g] = pred_hit[i] = true;
          break;
        }
      }
    }
    if (mode == MatchMode::kOverlap) {
      for (std::size_t i = 0; i < preds.size(); ++i) {
        if (pred_hit[i]) continue;
        for (std::size_t g = 0; g < entities.size(); ++g) {
          if (!gold_used[g] && entities[g].type == preds[i]->pii_type &&
              spans_overlap(entities[g].span, preds[i]->span)) {
            gold_used[g] = pred_hit[i] = true;
            break;
          }
        }
      }
    }
    for (std::size_t i = 0; i < preds.size(); ++i) {
      auto& c = counts[preds[i]->pii_type];
      if (pred_hit[i]) {
        ++c.tp;
      } else {
        ++c.fp;
      }
    }
    for (std::size_t g = 0; g < entities.size(); ++g) {
      if (!gold_used[g]) ++counts[entities[g].type].fn;
    }
  }
  Metrics m;
  Counts total;
  for (const auto& [type, c] : counts) {
    m.per_type[type] = FinishScore(c.tp, c.fp, c.fn);
    total.tp += c.tp;
    total.fp += c.fp;
    total.fn += c.fn;
  }
  m.micro = FinishScore(total.tp, total.fp, total.fn);
  return m;
}

nlohmann::json MetricsToJson(const Metrics& metrics) {
  auto to_json = [](const TypeScore& s) {
    return nlohmann::json{{"tp", s.tp},           {"fp", s.fp},         {"fn", s.fn},
                          {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
  };
  nlohmann::json per_type = nlohmann::json::object();
  for (const auto& [type, s] : metrics.per_type) per_type[type.name()] = to_json(s);
  nlohmann::json micro = to_json(metrics.micro);
  micro.erase("tp");
  micro.erase("fp");
  micro.erase("fn");
  return nlohmann::json{{"per_type", per_type}, {"micro", micro}};
}

namespace {

constexpr std::array<std::string_view, 200> kNames = {
    "Aaron", "Abigail", "Adrian", "Alana", "Alberto", "Alejandro", "Alexis",
    "Alfredo", "Alicia", "Alina", "Alison", "Amara", "Amelia", "Anders",
    "Andrea", "Angela", "Anika", "Annika", "Anton", "Arjun", "Arlo", "Astrid",
    "Aurelia", "Beatrix", "Benedikt", "Bianca", "Boris", "Bruno", "Caleb",
    "Camila", "Carlos", "Carmen", "Casimir", "Cecilia", "Cedric", "Celeste",
    "Chiara", "Clara", "Conrad", "Cordelia", "Cornelius", "Damian", "Daniela",
    "Dario", "Delphine", "Desmond", "Dimitri", "Dominik", "Dorothea", "Eamon",
    "Edgar", "Edmund", "Eleanor", "Elias", "Elif", "Elio", "Eliza", "Emeric",
    "Emilia", "Enzo", "Esther", "Ezra", "Fabian", "Farida", "Felix", "Fenna",
    "Fernando", "Fiona", "Florian", "Freya", "Gabriel", "Gareth", "Genevieve",
    "Gideon", "Giulia", "Gregor", "Greta", "Gustavo", "Hamid", "Hannah",
    "Harriet", "Hector", "Heidi", "Helena", "Henrik", "Hugo", "Ibrahim", "Ida",
    "Ignacio", "Imogen", "Ingrid", "Irene", "Isaac", "Isabel", "Ivana", "Jakob",
    "Jasper", "Javier", "Joaquin", "Jonas", "Josefa", "Julian", "Juliana",
    "Kamala", "Karim", "Katarina", "Kenji", "Klara", "Lars", "Leandro", "Leona",
    "Leopold", "Liesel", "Lorenzo", "Lucia", "Ludwig", "Magnus", "Malik",
    "Marcel", "Marisol", "Matilda", "Maximilian", "Milena", "Miriam", "Nadia",
    "Natalia", "Nikolai", "Nina", "Noemi", "Octavia", "Olga", "Omar", "Oskar",
    "Ottilie", "Pablo", "Paloma", "Pavel", "Petra", "Philippa", "Priya",
    "Quentin", "Rafael", "Ramona", "Rashid", "Raquel", "Renata", "Ricardo",
    "Rosalind", "Rupert", "Sabine", "Samir", "Santiago", "Selma", "Serena",
    "Sergei", "Silvia", "Simone", "Sofia", "Soren", "Stellan", "Sven", "Tamara",
    "Tariq", "Teodor", "Thea", "Tobias", "Tomas", "Ulrich", "Ursula",
    "Valentina", "Vera", "Viktor", "Vincent", "Wanda", "Wilhelmina", "Xavier",
    "Yara", "Yusuf", "Zara", "Zeynep", "Zoltan", "Agnes", "Anselm", "Bettina",
    "Cosima", "Dagmar", "Elodie", "Fritz", "Gunnar", "Hedda", "Ilse", "Jorge",
    "Konrad", "Linnea", "Mireille", "Nils", "Orla", "Pieter", "Rosalia",
    "Tiberius",
};

// SplitMix64: tiny, and its output sequence is fixed by definition, unlike
// the std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n).
  std::uint64_t Below(std::uint64_t n) {
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
      v = Next();
    } while (v >= limit);
    return v % n;
  }

  std::uint64_t Between(std::uint64_t lo, std::uint64_t hi) { return lo + Below(hi - lo + 1); }

  double Unit() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  template <typename T, std::size_t N>
  const T& Pick(const std::array<T, N>& items) {
    return items[Below(N)];
  }

 private:
  std::uint64_t state_;
};

constexpr std::array<std::string_view, 4> kLevels = {"INFO", "WARN", "DEBUG", "ERROR"};
constexpr std::array<std::string_view, 6> kServices = {"auth",   "billing", "gateway",
                                                       "ledger", "notifier", "scheduler"};
constexpr std::array<std::string_view, 6> kMailboxes = {"ops",     "sales",   "helpdesk",
                                                        "finance", "noreply", "alerts"};
constexpr std::array<std::string_view, 4> kDomains = {"example.com", "mail.example.org",
                                                      "corp.example.net", "example.co.uk"};

std::string Digits(Rng& rng, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<char>('0' + rng.Below(10)));
  return out;
}

std::string Phone(Rng& rng) {
  std::string area = std::to_string(rng.Between(2, 9)) + Digits(rng, 2);
  std::string exchange = std::to_string(rng.Between(2, 9)) + Digits(rng, 2);
  std::string line = Digits(rng, 4);
  switch (rng.Below(3)) {
    case 0:
      return "(" + area + ") " + exchange + "-" + line;
    case 1:
      return "(" + area + ") " + exchange + " " + line;
    default:
      return area + "-" + exchange + "-" + line;
  }
}

std::string Ssn(Rng& rng) {
  std::uint64_t area;
  do {
    area = rng.Between(1, 899);
  } while (area == 666);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03llu-%02llu-%04llu", static_cast<unsigned long long>(area),
                static_cast<unsigned long long>(rng.Between(1, 99)),
                static_cast<unsigned long long>(rng.Between(1, 9999)));
  return buf;
}

std::string Email(Rng& rng) {
  std::string local(rng.Pick(kMailboxes));
  if (rng.Below(2) == 0) local += "." + Digits(rng, 2);
  return local + "@" + std::string(rng.Pick(kDomains));
}

std::string Card(Rng& rng) {
  std::string digits = "4" + Digits(rng, 14);
  int sum = 0;
  // Walk right to left; the check digit will sit to the right, so the
  // rightmost payload digit is doubled.
  for (std::size_t i = 0; i < digits.size(); ++i) {
    int d = digits[digits.size() - 1 - i] - '0';
    if (i % 2 == 0) {
      d *= 2;
      if (d > 9) d -= 9;
    }
    sum += d;
  }
  digits.push_back(static_cast<char>('0' + (10 - sum % 10) % 10));
  return digits;
}

std::string Ip(Rng& rng) {
  return std::to_string(rng.Between(10, 223)) + "." + std::to_string(rng.Between(0, 254)) +
         "." + std::to_string(rng.Between(0, 254)) + "." + std::to_string(rng.Between(1, 254));
}

struct Generator {
  std::string_view type;
  std::array<std::string_view, 2> leads;
  std::string (*value)(Rng&);
};

std::string Name(Rng& rng) { return std::string(rng.Pick(kNames)); }

const std::array<Generator, 6>& Generators() {
  static const std::array<Generator, 6> kGenerators = {{
      {"PHONE_NUMBER", {"callback requested at", "sms sent to"}, &Phone},
      {"SSN", {"identity check for ssn", "tax record ssn"}, &Ssn},
      {"EMAIL", {"receipt emailed to", "login email"}, &Email},
      {"CREDIT_CARD", {"charge authorized on card", "refund issued to card"}, &Card},
      {"IP_ADDRESS", {"request from", "connection accepted from client"}, &Ip},
      {"PERSON_NAME", {"ticket assigned to", "profile updated by"}, &Name},
  }};
  return kGenerators;
}

}  // namespace

std::map<PiiType, double> DefaultSyntheticMix() {
  std::map<PiiType, double> mix;
  for (const Generator& g : Generators()) mix[PiiType::Parse(g.type)] = 1.0;
  return mix;
}

std::vector<AnnotatedDoc> generate_synthetic_corpus(const SyntheticOptions& options) {
  if (options.n_docs == 0) throw Error(ErrorCode::kInvalidArgument, "n_docs must be positive");
  if (options.min_entities == 0 || options.min_entities > options.max_entities) {
    throw Error(ErrorCode::kInvalidArgument, "entity bounds must satisfy 1 <= min <= max");
  }
  std::map<PiiType, double> mix = options.mix.empty() ? DefaultSyntheticMix() : options.mix;

  std::vector<std::pair<const Generator*, double>> weighted;
  double total = 0.0;
  for (const auto& [type, weight] : mix) {
    if (!(weight >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "negative weight for " + type.name());
    auto it = std::find_if(Generators().begin(), Generators().end(),
                           [&](const Generator& g) { return g.type == type.name(); });
    if (it == Generators().end()) {
      throw Error(ErrorCode::kInvalidArgument, "no generator for " + type.name());
    }
    if (weight == 0.0) continue;
    weighted.emplace_back(&*it, weight);
    total += weight;
  }
  if (weighted.empty()) throw Error(ErrorCode::kInvalidArgument, "mix has no positive weight");

  Rng rng(options.seed);
  std::vector<AnnotatedDoc> docs;
  docs.reserve(options.n_docs);
  for (std::size_t d = 0; d < options.n_docs; ++d) {
    AnnotatedDoc doc;
    doc.text = std::string(rng.Pick(kLevels)) + " " + std::string(rng.Pick(kServices)) + ": ";
    std::size_t n = rng.Between(options.min_entities, options.max_entities);
    for (std::size_t e = 0; e < n; ++e) {
      double r = rng.Unit() * total;
      const Generator* gen = weighted.back().first;
      for (const auto& [g, w] : weighted) {
        if (r < w) {
          gen = g;
          break;
        }
        r -= w;
      }
      if (e > 0) doc.text += "; ";
      doc.text += gen->leads[rng.Below(2)];
      doc.text += ' ';
      std::string value = gen->value(rng);
      std::size_t start = doc.text.size();
      doc.text += value;
      doc.gold.push_back(GoldEntity{Span{start, doc.text.size()}, PiiType::Parse(gen->type)});
    }
    doc.text += '.';
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::span<const std::string_view> BundledNames() { return kNames; }

}  // namespace maskron
