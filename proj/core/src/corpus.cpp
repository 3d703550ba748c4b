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

#include "elboot/corpus.hpp"

#include <istream>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>

#include "elboot/error.hpp"
#include "elboot/text.hpp"

namespace elboot {

std::optional<BioTag> parse_bio_tag(std::string_view tag) {
  if (tag == "O") return BioTag{};
  if (tag.size() < 3 || tag[1] != '-') return std::nullopt;
  BioTag bio;
  if (tag[0] == 'B') {
    bio.kind = BioTag::Kind::kBegin;
  } else if (tag[0] == 'I') {
    bio.kind = BioTag::Kind::kInside;
  } else {
    return std::nullopt;
  }
  auto type = parse_ne_type(tag.substr(2));
  if (!type) return std::nullopt;
  bio.type = *type;
  return bio;
}

namespace {

class ConllReader {
 public:
  explicit ConllReader(const ConllOptions &options)
      : options_(options), marker_(options.doc_marker) {}

  void line(std::string_view raw, std::size_t lineno) {
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (!text::is_valid_utf8(raw)) {
      throw EncodingError(lineno, "invalid UTF-8");
    }
    const std::string_view trimmed = text::trim(raw);
    if (trimmed.empty()) {
      end_sentence();
      return;
    }
    if (trimmed.front() == '#') {
      std::match_results<std::string_view::const_iterator> m;
      if (std::regex_match(trimmed.begin(), trimmed.end(), m, marker_)) {
        end_sentence();
        open_document(m[1].str(), m[2].str(), lineno);
      }
      return;
    }

    auto fields = text::split_whitespace(trimmed);
    if (fields.size() < 2) {
      throw ParseError(lineno, "expected '<surface> <tag> [morph]'");
    }
    if (fields.size() > 3) {
      throw ParseError(lineno, "too many columns");
    }
    if (!parse_bio_tag(fields[1])) {
      throw ParseError(lineno, "malformed NER tag '" + std::string(fields[1]) + "'");
    }
    if (docs_.empty()) {
      open_document(options_.default_doc_id, options_.default_subcategory,
                    lineno);
    }
    Token token;
    token.surface = std::string(fields[0]);
    token.ner_tag = std::string(fields[1]);
    if (fields.size() == 3) token.morph_tag = std::string(fields[2]);
    token.index = static_cast<int>(sentence_.size());
    sentence_.push_back(std::move(token));
  }

  std::vector<Document> finish() {
    end_sentence();
    return std::move(docs_);
  }

 private:
  void end_sentence() {
    if (sentence_.empty()) return;
    docs_.back().sentences.push_back(std::move(sentence_));
    sentence_.clear();
  }

  void open_document(std::string id, std::string subcategory,
                     std::size_t lineno) {
    if (!ids_.insert(id).second) {
      throw ParseError(lineno, "duplicate document id '" + id + "'");
    }
    docs_.push_back(Document{std::move(id), std::move(subcategory), {}});
  }

  const ConllOptions &options_;
  std::regex marker_;
  std::vector<Document> docs_;
  std::set<std::string> ids_;
  Sentence sentence_;
};

std::string join_surfaces(const Sentence &sentence, int begin, int end) {
  std::string out;
  for (int i = begin; i < end; ++i) {
    if (i > begin) out.push_back(' ');
    out += sentence[i].surface;
  }
  return out;
}

}  // namespace

std::vector<Document> parse_conll(std::istream &in,
                                  const ConllOptions &options) {
  ConllReader reader(options);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) reader.line(line, ++lineno);
  return reader.finish();
}

std::vector<Document> parse_conll(std::string_view text,
                                  const ConllOptions &options) {
  std::istringstream in{std::string(text)};
  return parse_conll(in, options);
}

void write_conll(std::span<const Document> docs, std::ostream &out) {
  for (const Document &doc : docs) {
    out << "# newdoc id = " << doc.id << " subcat = " << doc.subcategory
        << '\n';
    for (const Sentence &sentence : doc.sentences) {
      for (const Token &token : sentence) {
        out << token.surface << '\t' << token.ner_tag;
        if (token.morph_tag) out << '\t' << *token.morph_tag;
        out << '\n';
      }
      out << '\n';
    }
  }
}

Context build_context(const Sentence &sentence, TokenSpan span,
                      std::size_t window_chars) {
  if (window_chars == 0) throw InputError("context window must be positive");
  const int n = static_cast<int>(sentence.size());
  if (span.begin < 0 || span.end > n || span.begin >= span.end) {
    throw InputError("token span outside sentence");
  }

  Context ctx;
  // Left side, growing outward from the mention.
  int lo = span.begin;
  std::size_t used = 0;
  while (lo > 0) {
    const std::size_t word = text::codepoint_count(sentence[lo - 1].surface);
    const std::size_t cost = used == 0 ? word : used + 1 + word;
    if (lo < span.begin && cost > window_chars) break;
    used = cost;
    --lo;
  }
  ctx.left = join_surfaces(sentence, lo, span.begin);

  int hi = span.end;
  used = 0;
  while (hi < n) {
    const std::size_t word = text::codepoint_count(sentence[hi].surface);
    const std::size_t cost = used == 0 ? word : used + 1 + word;
    if (hi > span.end && cost > window_chars) break;
    used = cost;
    ++hi;
  }
  ctx.right = join_surfaces(sentence, span.end, hi);
  return ctx;
}

std::string make_mention_id(std::string_view doc_id, int sentence_index,
                            int token_begin) {
  std::string id(doc_id);
  id += ':';
  id += std::to_string(sentence_index);
  id += ':';
  id += std::to_string(token_begin);
  return id;
}

std::vector<Mention> extract_mentions(const Document &doc,
                                      std::size_t window_chars) {
  std::vector<Mention> mentions;
  for (int s = 0; s < static_cast<int>(doc.sentences.size()); ++s) {
    const Sentence &sentence = doc.sentences[s];
    const int n = static_cast<int>(sentence.size());
    int i = 0;
    while (i < n) {
      auto tag = parse_bio_tag(sentence[i].ner_tag);
      if (!tag || tag->kind == BioTag::Kind::kOutside) {
        ++i;
        continue;
      }
      // A B tag or an orphan I tag starts a run; I tags of the same type
      // extend it.
      int j = i + 1;
      while (j < n) {
        auto next = parse_bio_tag(sentence[j].ner_tag);
        if (!next || next->kind != BioTag::Kind::kInside ||
            next->type != tag->type) {
          break;
        }
        ++j;
      }
      Mention m;
      m.id = make_mention_id(doc.id, s, i);
      m.doc_id = doc.id;
      m.sentence_index = s;
      m.span = TokenSpan{i, j};
      m.surface = join_surfaces(sentence, i, j);
      m.ne_type = tag->type;
      Context ctx = build_context(sentence, m.span, window_chars);
      m.left_context = std::move(ctx.left);
      m.right_context = std::move(ctx.right);
      for (int k = i; k < j; ++k) m.morph_tags.push_back(sentence[k].morph_tag);
      mentions.push_back(std::move(m));
      i = j;
    }
  }
  return mentions;
}

std::vector<Mention> filter_linkable(std::span<const Mention> mentions) {
  std::vector<Mention> out;
  for (const Mention &m : mentions) {
    if (is_linkable(m.ne_type)) out.push_back(m);
  }
  return out;
}

}  // namespace elboot
