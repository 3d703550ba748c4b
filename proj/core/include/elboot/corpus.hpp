// Copyright 2026 The elboot Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ELBOOT_CORPUS_HPP_
#define ELBOOT_CORPUS_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elboot/types.hpp"

namespace elboot {

struct Token {
  std::string surface;
  std::string ner_tag;  // "O", "B-<Type>" or "I-<Type>"
  std::optional<std::string> morph_tag;
  int index = 0;

  friend bool operator==(const Token &, const Token &) = default;
};

using Sentence = std::vector<Token>;

struct Document {
  std::string id;
  std::string subcategory;
  std::vector<Sentence> sentences;

  friend bool operator==(const Document &, const Document &) = default;
};

// Half-open token range [begin, end) within a sentence.
struct TokenSpan {
  int begin = 0;
  int end = 0;

  int size() const { return end - begin; }
  friend bool operator==(const TokenSpan &, const TokenSpan &) = default;
};

struct Mention {
  std::string id;
  std::string doc_id;
  int sentence_index = 0;
  TokenSpan span;
  std::string surface;
  NeType ne_type = NeType::kPerson;
  std::string left_context;
  std::string right_context;
  std::vector<std::optional<std::string>> morph_tags;

  friend bool operator==(const Mention &, const Mention &) = default;
};

// Decoded BIO tag.
struct BioTag {
  enum class Kind { kOutside, kBegin, kInside };
  Kind kind = Kind::kOutside;
  NeType type = NeType::kPerson;  // meaningless for kOutside
};

// Parses "O", "B-<Type>", "I-<Type>" with <Type> one of the eight NE types.
std::optional<BioTag> parse_bio_tag(std::string_view tag);

inline constexpr std::size_t kDefaultContextWindow = 256;

struct ConllOptions {
  // ECMAScript regex matched against comment lines. Group 1 is the document
  // id, group 2 the subcategory.
  std::string doc_marker =
      R"(^#\s*newdoc\s+id\s*=\s*(\S+)\s+subcat\s*=\s*(\S+)\s*$)";
  // Used for tokens that appear before any document marker.
  std::string default_doc_id = "document";
  std::string default_subcategory = "unknown";
};

// Reads one-token-per-line CoNLL text: surface, NER tag and an optional
// morphological tag. Blank lines end sentences. Comment lines start with
// '#'; those matching options.doc_marker open a new document.
//
// Throws EncodingError for non-UTF-8 input and ParseError for malformed
// lines, both carrying the 1-based line number.
std::vector<Document> parse_conll(std::istream &in,
                                  const ConllOptions &options = {});
std::vector<Document> parse_conll(std::string_view text,
                                  const ConllOptions &options = {});

// Writes documents back in the default marker format, tab separated.
void write_conll(std::span<const Document> docs, std::ostream &out);

struct Context {
  std::string left;
  std::string right;
};

// Sentence-bounded context around `span`. Each side takes whole words
// outward from the mention while the joined text stays within
// `window_chars` code points; the adjacent word is always kept so a side
// is either empty or at least one word. Throws InputError if
// window_chars == 0.
Context build_context(const Sentence &sentence, TokenSpan span,
                      std::size_t window_chars);

// Maximal B/I runs of the same type become one mention. An I tag that does
// not continue a run of its own type opens a new mention.
std::vector<Mention> extract_mentions(
    const Document &doc, std::size_t window_chars = kDefaultContextWindow);

// Keeps Person, Location, Organization and Miscellaneous in input order.
std::vector<Mention> filter_linkable(std::span<const Mention> mentions);

// "<doc_id>:<sentence_index>:<token_begin>"
std::string make_mention_id(std::string_view doc_id, int sentence_index,
                            int token_begin);

}  // namespace elboot

#endif  // ELBOOT_CORPUS_HPP_
