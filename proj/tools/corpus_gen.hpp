#pragma once

// Deterministic synthetic corpus generator.
//
// Documents are built from ~65 hand-written semantic fields (felines, banking,
// astronomy, ...). Each document activates one to three fields and emits
// sentences mixing field words with function words and generic fillers, so the
// co-occurrence statistics of the output encode genuine topical neighborhoods.
// Polysemous words (jaguar, bishop, drink, ...) deliberately appear in several
// fields. Output is lowercase, whitespace-tokenized, one sentence per line.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "graphglove/common.hpp"

namespace corpusgen {

inline const std::vector<std::vector<std::string>>& topic_banks() {
  static const std::vector<std::vector<std::string>> banks = {
      {"tiger", "cat", "lion", "jaguar", "leopard", "feline", "carnivore", "predator", "mammal",
       "animal", "zoo", "fauna", "wildlife", "cub", "prey", "organism", "stripe"},
      {"bird", "cock", "rooster", "crane", "hen", "goose", "duck", "feather", "nest", "flock",
       "wing", "sparrow", "eagle", "owl", "beak"},
      {"money", "cash", "currency", "bank", "dollar", "deposit", "withdrawal", "wealth",
       "property", "possession", "buck", "yen", "account", "loan", "fund", "savings",
       "laundering", "interest", "credit", "teller"},
      {"stock", "market", "company", "share", "investor", "trader", "profit", "loss", "dividend",
       "earning", "index", "trading", "gain", "portfolio", "exchange", "payment", "hike",
       "currency", "dollar", "oil", "broker"},
      {"computer", "keyboard", "internet", "software", "hardware", "network", "server", "program",
       "code", "laptop", "screen", "web", "email", "data", "file", "cd", "processor", "disk"},
      {"telephone", "phone", "communication", "television", "radio", "media", "news", "report",
       "broadcast", "announcement", "press", "journalist", "interview", "channel", "viewer",
       "serial", "series", "video", "archive", "warning", "film", "image", "cell", "issue",
       "equipment", "headline"},
      {"bread", "butter", "cheese", "milk", "egg", "flour", "toast", "jam", "breakfast", "meal",
       "food", "eat", "drink", "kitchen", "sugar", "fruit", "grocery", "preparation", "recipe"},
      {"cucumber", "potato", "cabbage", "carrot", "onion", "tomato", "lettuce", "pepper",
       "vegetable", "garden", "salad", "harvest", "soil"},
      {"doctor", "nurse", "hospital", "patient", "clinic", "medicine", "treatment", "surgeon",
       "stroke", "disease", "health", "therapy", "diagnosis", "cure", "disability", "ward"},
      {"professor", "student", "university", "lecture", "school", "teacher", "education", "exam",
       "classroom", "study", "discipline", "science", "scholar", "smart", "stupid", "practice",
       "recess", "campus", "doctor"},
      {"vodka", "gin", "brandy", "wine", "beer", "whiskey", "drink", "alcohol", "cocktail", "bar",
       "bottle", "glass", "mouth", "pub", "toast"},
      {"king", "queen", "crown", "throne", "palace", "royal", "monarch", "prince", "princess",
       "castle", "reign"},
      {"chess", "king", "queen", "rook", "bishop", "pawn", "knight", "board", "checkmate",
       "opening", "endgame", "grandmaster"},
      {"bishop", "rabbi", "priest", "monk", "church", "temple", "holy", "prayer", "faith", "god",
       "worship", "shrine", "brother", "chapel", "sermon"},
      {"jerusalem", "israel", "palestinian", "arafat", "peace", "terror", "conflict", "territory",
       "treaty", "border", "settlement", "homeland", "negotiation"},
      {"football", "soccer", "basketball", "tennis", "maradona", "goal", "player", "team", "game",
       "match", "championship", "tournament", "cup", "victory", "defeat", "season", "coach",
       "league", "racket", "court", "referee"},
      {"baseball", "marathon", "sprint", "boxing", "round", "athlete", "race", "medal", "stadium",
       "runner", "fighting", "defeating", "activity", "season", "record"},
      {"medal", "decoration", "valor", "honor", "award", "ceremony", "motto", "volunteer",
       "prize", "bravery"},
      {"law", "lawyer", "court", "judge", "precedent", "justice", "trial", "crime", "murder",
       "manslaughter", "verdict", "attorney", "legal", "case"},
      {"movie", "star", "popcorn", "critic", "theater", "film", "actor", "cinema", "screen",
       "director", "audience", "drama", "museum", "admission", "ticket", "premiere"},
      {"physics", "proton", "chemistry", "atom", "electron", "particle", "laboratory",
       "experiment", "energy", "quantum", "theory", "scientist", "science", "computer"},
      {"planet", "star", "constellation", "moon", "galaxy", "space", "astronomer", "orbit",
       "telescope", "mars", "sun", "universe", "discovery", "atmosphere", "observation",
       "observatory", "scientist"},
      {"psychology", "psychiatry", "anxiety", "fear", "depression", "clinic", "mind", "cognition",
       "emotion", "therapy", "behavior", "brain", "freud", "health"},
      {"baby", "mother", "father", "family", "child", "children", "brother", "sister", "parent",
       "son", "daughter", "marriage", "wedding", "home", "girl", "boy", "planning"},
      {"journey", "voyage", "travel", "trip", "hotel", "reservation", "arrival", "flight",
       "airport", "ticket", "tourist", "luggage", "destination", "accommodation", "registration",
       "arrangement", "departure", "passport"},
      {"car", "automobile", "train", "plane", "truck", "bus", "vehicle", "engine", "driver",
       "road", "highway", "traffic", "wheel", "luxury", "jaguar", "garage"},
      {"coast", "shore", "beach", "sea", "cliff", "bay", "island", "harbor", "tide", "wave",
       "ocean", "sand"},
      {"wood", "forest", "woodland", "tree", "timber", "grove", "pine", "oak", "leaf", "branch",
       "lumber", "moss"},
      {"cemetery", "graveyard", "death", "grave", "funeral", "burial", "tomb", "mourning",
       "coffin", "headstone"},
      {"gem", "jewel", "diamond", "gold", "ruby", "emerald", "pearl", "necklace", "treasure",
       "jewelry", "sapphire"},
      {"magician", "wizard", "magic", "spell", "trick", "oracle", "sorcerer", "wand", "illusion",
       "conjurer"},
      {"midday", "noon", "day", "dawn", "dusk", "morning", "evening", "hour", "minute", "clock",
       "wednesday", "afternoon", "midnight"},
      {"century", "year", "month", "week", "season", "summer", "winter", "spring", "decade",
       "autumn", "calendar", "era"},
      {"tool", "implement", "hammer", "wrench", "saw", "drill", "blade", "device", "instrument",
       "equipment", "maker", "workshop"},
      {"cup", "coffee", "tea", "tableware", "plate", "bowl", "spoon", "fork", "mug", "saucer",
       "kettle", "liquid", "drink", "porcelain"},
      {"weather", "forecast", "shower", "thunderstorm", "flood", "rain", "storm", "drought",
       "wind", "cloud", "temperature", "climate", "summer", "heat"},
      {"nature", "environment", "ecology", "landscape", "canyon", "wilderness", "habitat",
       "conservation", "preservation", "earth", "world", "hill", "valley", "mountain"},
      {"music", "rock", "jazz", "concert", "song", "band", "guitar", "melody", "rhythm", "chord",
       "orchestra", "chorus"},
      {"love", "sex", "passion", "smile", "joy", "happiness", "affection", "romance", "kiss",
       "lover", "quarrel", "embrace"},
      {"war", "troops", "weapon", "soldier", "army", "battle", "deployment", "withdrawal",
       "departure", "combat", "defense", "secret", "operation", "barracks"},
      {"fbi", "fingerprint", "investigation", "detective", "evidence", "police", "arrest",
       "suspect", "agent", "surveillance"},
      {"opec", "oil", "energy", "crisis", "barrel", "petroleum", "gas", "fuel", "production",
       "consumer", "refinery", "pipeline"},
      {"president", "government", "minister", "party", "senate", "secretary", "election",
       "governor", "office", "policy", "congress", "vote", "ministry", "cabinet", "crisis",
       "campaign"},
      {"mile", "kilometer", "meter", "distance", "inch", "foot", "yard", "measure", "calculation",
       "computation", "number", "record", "benchmark", "five", "seven", "digit"},
      {"street", "avenue", "block", "place", "city", "town", "neighborhood", "sidewalk", "corner",
       "square", "sign", "plaza", "direction"},
      {"bed", "closet", "clothes", "room", "furniture", "wardrobe", "apartment", "house", "door",
       "window", "furnace", "stove", "curtain"},
      {"asylum", "madhouse", "insanity", "lunatic", "institution", "isolation"},
      {"boy", "lad", "girl", "man", "woman", "person", "fellow", "guy", "kid", "youth",
       "stranger"},
      {"seafood", "sea", "lobster", "fish", "shrimp", "crab", "oyster", "salmon", "tuna",
       "fishing", "food", "chowder"},
      {"drug", "abuse", "addiction", "cocaine", "heroin", "substance", "rehab", "overdose",
       "alcohol"},
      {"fertility", "egg", "embryo", "pregnancy", "birth", "gene", "organism", "cell", "biology",
       "womb"},
      {"book", "paper", "library", "page", "author", "novel", "reading", "shelf", "publisher",
       "literature", "text", "word", "manuscript"},
      {"glass", "metal", "aluminum", "steel", "iron", "copper", "alloy", "surface", "foundry",
       "ore"},
      {"japanese", "american", "mexico", "brazil", "country", "nation", "foreign", "culture",
       "language", "population", "diplomat", "embassy"},
      {"morality", "gender", "equality", "attitude", "value", "ethics", "principle", "prejudice",
       "racism", "recognition", "impartiality", "virtue", "minority"},
      {"disaster", "area", "emergency", "problem", "rescue", "damage", "earthquake", "relief",
       "delay", "evacuation"},
      {"skin", "eye", "ear", "mouth", "hand", "face", "body", "hair", "tooth", "finger", "elbow"},
      {"plan", "planning", "development", "project", "effort", "attempt", "proposal", "strategy",
       "approach", "focus", "change", "situation", "conclusion", "recommendation", "possibility"},
      {"insurance", "policy", "claim", "premium", "credit", "card", "confidence", "company",
       "broker", "industry", "underwriter"},
      {"type", "kind", "sort", "example", "category", "group", "collection", "information",
       "listing", "label"},
      {"entity", "object", "artifact", "substance", "proximity", "combination", "similarity",
       "pattern", "notion", "importance"},
      {"life", "death", "lesson", "experience", "childhood", "memory", "term", "youth"},
      {"opera", "performance", "soap", "stage", "singer", "aria", "theater", "production",
       "crew", "rehearsal"},
      {"history", "architecture", "museum", "monument", "heritage", "culture", "slave",
       "antiquity", "ruins"},
      {"water", "liquid", "seepage", "river", "lake", "stream", "flow", "rain", "current"},
      {"string", "thread", "rope", "cord", "ribbon", "knot", "fabric", "weave", "line"},
      {"game", "round", "series", "team", "victory", "defeat", "player", "match", "start",
       "dice", "tournament"},
  };
  return banks;
}

// Function words, sampled with Zipf weights 1/(rank+1.5).
inline const std::vector<std::string>& common_words() {
  static const std::vector<std::string> words = {
      "the",  "of",   "and",   "a",     "to",    "in",   "is",    "was",  "it",    "for",
      "on",   "with", "as",    "at",    "by",    "from", "that",  "this", "be",    "are",
      "were", "has",  "have",  "had",   "not",   "but",  "or",    "an",   "they",  "their",
      "its",  "one",  "two",   "new",   "more",  "most", "other", "some", "such",  "only",
      "over", "after", "also", "into",  "which", "who",  "all",   "when", "where", "while",
      "than", "then", "there", "these", "those", "very", "much",  "many", "each",  "both"};
  return words;
}

// Generic content words used across every field. Kept disjoint from the topic
// banks so they never blur topical neighborhoods.
inline const std::vector<std::string>& filler_words() {
  static const std::vector<std::string> words = {
      "said",      "made",      "found",     "became",   "called",    "known",     "seen",
      "used",      "given",     "taken",     "held",     "kept",      "left",      "went",
      "came",      "told",      "asked",     "showed",   "began",     "felt",      "brought",
      "thought",   "heard",     "met",       "ran",      "gave",      "looked",    "turned",
      "worked",    "played",    "moved",     "lived",    "opened",    "closed",    "won",
      "lost",      "paid",      "sold",      "bought",   "built",     "wrote",     "read",
      "spoke",     "sent",      "received",  "carried",  "covered",   "raised",    "reached",
      "passed",    "followed",  "stopped",   "started",  "continued", "remained",  "appeared",
      "served",    "joined",    "returned",  "offered",  "expected",  "believed",  "considered",
      "described", "reported",  "noted",     "added",    "great",     "small",     "large",
      "good",      "long",      "high",      "low",      "early",     "late",      "old",
      "young",     "important", "certain",   "likely",   "recent",    "major",     "minor",
      "local",     "national",  "public",    "private",  "general",   "special",   "short",
      "strong",    "weak",      "true",      "real",     "full",      "clear",     "whole",
      "free",      "open",      "ready",     "deep",     "wide",      "narrow",    "bright",
      "dark",      "heavy",     "light",     "quick",    "slow",      "warm",      "cold",
      "dry",       "wet",       "rich",      "poor",     "busy",      "quiet",     "simple",
      "hard",      "soft",      "easy",      "fine",     "broad",     "sharp",     "plain",
      "rough",     "smooth",    "thick",     "thin",     "tiny",      "huge",      "vast",
      "grand",     "noble",     "humble",    "eager",    "calm",      "fierce",    "gentle",
      "wild",      "tame",      "swift",     "steady",   "modern",    "ancient",   "famous",
      "typical",   "useful",    "useless",   "perfect",  "curious",   "serious",   "various",
      "numerous",  "frequent",  "rare",      "usual",    "strange",   "familiar",  "distant",
      "near",      "dear",      "cheap",     "costly",   "thing",     "way",       "part",
      "side",      "point",     "fact",      "idea",     "question",  "matter",    "piece",
      "step",      "phase",     "level",     "degree",   "amount",    "result",    "reason",
      "moment",    "middle",    "beginning", "ending",   "purpose",   "manner",    "nobody",
      "somebody",  "everyone",  "anything",  "nothing",  "something", "everything"};
  return words;
}

struct CorpusSpec {
  uint64_t seed = 2024;
  uint64_t target_bytes = 10ull * 1000 * 1000;
};

namespace detail {

constexpr uint64_t kDocTag = 0x636f7270;  // per-document substream tag

inline const std::vector<double>& common_cdf() {
  static const std::vector<double> cdf = [] {
    std::vector<double> c;
    double acc = 0.0;
    for (size_t i = 0; i < common_words().size(); ++i) {
      acc += 1.0 / (static_cast<double>(i) + 1.5);
      c.push_back(acc);
    }
    for (double& x : c) x /= acc;
    return c;
  }();
  return cdf;
}

inline const std::string& pick_common(graphglove::Rng& rng) {
  const auto& cdf = common_cdf();
  double u = rng.uniform01();
  size_t lo = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
  if (lo >= cdf.size()) lo = cdf.size() - 1;
  return common_words()[lo];
}

}  // namespace detail

// Streams sentences until at least target_bytes have been written; returns the
// byte count. Deterministic in spec.seed regardless of platform.
inline uint64_t generate_corpus(std::ostream& out, const CorpusSpec& spec) {
  const auto& banks = topic_banks();
  uint64_t written = 0;
  std::string line;
  for (uint64_t doc = 0; written < spec.target_bytes; ++doc) {
    graphglove::Rng rng(graphglove::substream(spec.seed, detail::kDocTag, doc));

    double tu = rng.uniform01();
    size_t n_topics = tu < 0.50 ? 1 : tu < 0.85 ? 2 : 3;
    std::vector<size_t> chosen;
    while (chosen.size() < n_topics) {
      size_t t = rng.below(banks.size());
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
    }
    std::vector<const std::string*> pool;
    for (size_t t : chosen)
      for (const auto& w : banks[t]) pool.push_back(&w);

    uint64_t sentences = 25 + rng.below(56);
    for (uint64_t s = 0; s < sentences; ++s) {
      uint64_t len = 6 + rng.below(9);
      line.clear();
      for (uint64_t k = 0; k < len; ++k) {
        double u = rng.uniform01();
        const std::string& tok = u < 0.60 ? *pool[rng.below(pool.size())]
                                 : u < 0.85
                                     ? detail::pick_common(rng)
                                     : filler_words()[rng.below(filler_words().size())];
        if (!line.empty()) line.push_back(' ');
        line += tok;
      }
      line.push_back('\n');
      out.write(line.data(), static_cast<std::streamsize>(line.size()));
      written += line.size();
    }
  }
  if (!out) throw graphglove::data_error("generate_corpus: write failed");
  return written;
}

}  // namespace corpusgen
