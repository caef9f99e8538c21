#include "opengloss/json_io.hpp"

#include "opengloss/normalize.hpp"

namespace opengloss {

using nlohmann::json;

namespace {

struct SchemaCursor {
    // Dotted path for diagnostics.
    std::string where;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("schema error at " + (where.empty() ? "<root>" : where) + ": " + what, 0);
    }

    SchemaCursor at(std::string_view key) const {
        return {where.empty() ? std::string(key) : where + "." + std::string(key)};
    }
    SchemaCursor at(std::size_t index) const {
        return {where + "[" + std::to_string(index) + "]"};
    }
};

std::string require_string(const json& v, const SchemaCursor& c) {
    if (!v.is_string()) c.fail("expected string, got " + std::string(v.type_name()));
    return v.get<std::string>();
}

std::vector<std::string> string_list(const json& v, const SchemaCursor& c) {
    if (!v.is_array()) c.fail("expected array, got " + std::string(v.type_name()));
    std::vector<std::string> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(require_string(v[i], c.at(i)));
    }
    return out;
}

PartOfSpeech require_pos(const json& v, const SchemaCursor& c) {
    std::string text = require_string(v, c);
    auto pos = parse_part_of_speech(text);
    if (!pos) c.fail("unknown part of speech '" + text + "'");
    return *pos;
}

LexicalSense sense_from_json(const json& v, const SchemaCursor& c) {
    if (!v.is_object()) c.fail("expected object");
    LexicalSense sense;
    if (auto it = v.find("definition"); it != v.end()) {
        sense.definition = require_string(*it, c.at("definition"));
    }
    if (auto it = v.find("synonyms"); it != v.end()) sense.synonyms = string_list(*it, c.at("synonyms"));
    if (auto it = v.find("antonyms"); it != v.end()) sense.antonyms = string_list(*it, c.at("antonyms"));
    if (auto it = v.find("hypernyms"); it != v.end())
        sense.hypernyms = string_list(*it, c.at("hypernyms"));
    if (auto it = v.find("hyponyms"); it != v.end()) sense.hyponyms = string_list(*it, c.at("hyponyms"));
    if (auto it = v.find("examples"); it != v.end()) sense.examples = string_list(*it, c.at("examples"));
    return sense;
}

Morphology morphology_from_json(const json& v, const SchemaCursor& c) {
    if (!v.is_object()) c.fail("expected object");
    Morphology m;
    if (auto it = v.find("inflections"); it != v.end()) {
        const SchemaCursor ic = c.at("inflections");
        if (!it->is_array()) ic.fail("expected array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const json& e = (*it)[i];
            const SchemaCursor ec = ic.at(i);
            if (!e.is_object()) ec.fail("expected object");
            Inflection infl;
            infl.form = require_string(e.value("form", json()), ec.at("form"));
            infl.feature = require_string(e.value("feature", json()), ec.at("feature"));
            m.inflections.push_back(std::move(infl));
        }
    }
    if (auto it = v.find("derivations"); it != v.end()) {
        const SchemaCursor dc = c.at("derivations");
        if (!it->is_array()) dc.fail("expected array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const json& e = (*it)[i];
            const SchemaCursor ec = dc.at(i);
            if (!e.is_object()) ec.fail("expected object");
            Derivation d;
            d.form = require_string(e.value("form", json()), ec.at("form"));
            d.target_pos = require_pos(e.value("pos", json()), ec.at("pos"));
            m.derivations.push_back(std::move(d));
        }
    }
    return m;
}

Etymology etymology_from_json(const json& v, const SchemaCursor& c) {
    if (!v.is_object()) c.fail("expected object");
    Etymology ety;
    if (auto it = v.find("trail"); it != v.end()) {
        const SchemaCursor tc = c.at("trail");
        if (!it->is_array()) tc.fail("expected array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const json& e = (*it)[i];
            const SchemaCursor ec = tc.at(i);
            if (!e.is_object()) ec.fail("expected object");
            EtymologyStep step;
            step.language = require_string(e.value("language", json()), ec.at("language"));
            step.form = require_string(e.value("form", json()), ec.at("form"));
            if (auto g = e.find("gloss"); g != e.end() && !g->is_null()) {
                step.gloss = require_string(*g, ec.at("gloss"));
            }
            ety.trail.push_back(std::move(step));
        }
    }
    if (auto it = v.find("cognates"); it != v.end()) {
        const SchemaCursor cc = c.at("cognates");
        if (!it->is_array()) cc.fail("expected array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const json& e = (*it)[i];
            const SchemaCursor ec = cc.at(i);
            if (!e.is_object()) ec.fail("expected object");
            Cognate cog;
            cog.language = require_string(e.value("language", json()), ec.at("language"));
            cog.form = require_string(e.value("form", json()), ec.at("form"));
            ety.cognates.push_back(std::move(cog));
        }
    }
    if (auto it = v.find("components"); it != v.end()) {
        ety.components = string_list(*it, c.at("components"));
    }
    if (auto it = v.find("notes"); it != v.end() && !it->is_null()) {
        ety.notes = require_string(*it, c.at("notes"));
    }
    return ety;
}

const char* const kKnownKeys[] = {"lemma",       "pos_entries",     "etymology", "encyclopedia",
                                  "is_stopword", "stopword_reason", "metadata"};

bool is_known_key(const std::string& key) {
    for (const char* k : kKnownKeys)
        if (key == k) return true;
    return false;
}

json sense_to_json(const LexicalSense& sense) {
    json v = json::object();
    v["definition"] = sense.definition;
    if (!sense.synonyms.empty()) v["synonyms"] = sense.synonyms;
    if (!sense.antonyms.empty()) v["antonyms"] = sense.antonyms;
    if (!sense.hypernyms.empty()) v["hypernyms"] = sense.hypernyms;
    if (!sense.hyponyms.empty()) v["hyponyms"] = sense.hyponyms;
    if (!sense.examples.empty()) v["examples"] = sense.examples;
    return v;
}

json morphology_to_json(const Morphology& m) {
    json v = json::object();
    if (!m.inflections.empty()) {
        json arr = json::array();
        for (const auto& infl : m.inflections) {
            arr.push_back({{"form", infl.form}, {"feature", infl.feature}});
        }
        v["inflections"] = std::move(arr);
    }
    if (!m.derivations.empty()) {
        json arr = json::array();
        for (const auto& d : m.derivations) {
            arr.push_back({{"form", d.form}, {"pos", std::string(to_string(d.target_pos))}});
        }
        v["derivations"] = std::move(arr);
    }
    return v;
}

json etymology_to_json(const Etymology& ety) {
    json v = json::object();
    if (!ety.trail.empty()) {
        json arr = json::array();
        for (const auto& step : ety.trail) {
            json s = {{"language", step.language}, {"form", step.form}};
            if (step.gloss) s["gloss"] = *step.gloss;
            arr.push_back(std::move(s));
        }
        v["trail"] = std::move(arr);
    }
    if (!ety.cognates.empty()) {
        json arr = json::array();
        for (const auto& cog : ety.cognates) {
            arr.push_back({{"language", cog.language}, {"form", cog.form}});
        }
        v["cognates"] = std::move(arr);
    }
    if (!ety.components.empty()) v["components"] = ety.components;
    if (ety.notes) v["notes"] = *ety.notes;
    return v;
}

}  // namespace

LexemeEntry entry_from_json(const json& doc) {
    SchemaCursor root;
    if (!doc.is_object()) root.fail("top-level value must be a JSON object");

    LexemeEntry entry;
    auto lemma_it = doc.find("lemma");
    if (lemma_it == doc.end()) root.fail("missing required field 'lemma'");
    std::string raw_lemma = require_string(*lemma_it, root.at("lemma"));
    entry.lemma = normalize_lemma_lenient(raw_lemma);
    if (entry.lemma.empty()) root.at("lemma").fail("lemma is empty after normalization");

    if (auto it = doc.find("pos_entries"); it != doc.end()) {
        const SchemaCursor pc = root.at("pos_entries");
        if (!it->is_array()) pc.fail("expected array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const json& e = (*it)[i];
            const SchemaCursor ec = pc.at(i);
            if (!e.is_object()) ec.fail("expected object");
            PartOfSpeechEntry pe;
            auto pos_it = e.find("pos");
            if (pos_it == e.end()) ec.fail("missing required field 'pos'");
            pe.pos = require_pos(*pos_it, ec.at("pos"));
            if (auto s = e.find("senses"); s != e.end()) {
                const SchemaCursor sc = ec.at("senses");
                if (!s->is_array()) sc.fail("expected array");
                for (std::size_t j = 0; j < s->size(); ++j) {
                    pe.senses.push_back(sense_from_json((*s)[j], sc.at(j)));
                }
            }
            if (auto m = e.find("morphology"); m != e.end() && !m->is_null()) {
                pe.morphology = morphology_from_json(*m, ec.at("morphology"));
            }
            if (auto col = e.find("collocations"); col != e.end()) {
                pe.collocations = string_list(*col, ec.at("collocations"));
            }
            entry.pos_entries.push_back(std::move(pe));
        }
    }

    if (auto it = doc.find("etymology"); it != doc.end() && !it->is_null()) {
        entry.etymology = etymology_from_json(*it, root.at("etymology"));
    }
    if (auto it = doc.find("encyclopedia"); it != doc.end() && !it->is_null()) {
        const SchemaCursor ec = root.at("encyclopedia");
        if (!it->is_object()) ec.fail("expected object");
        EncyclopediaEntry enc;
        enc.body = require_string(it->value("body", json()), ec.at("body"));
        // The stored count is advisory; the derived count is authoritative.
        enc.word_count = count_words(enc.body);
        entry.encyclopedia = std::move(enc);
    }
    if (auto it = doc.find("is_stopword"); it != doc.end()) {
        if (!it->is_boolean()) root.at("is_stopword").fail("expected boolean");
        entry.is_stopword = it->get<bool>();
    }
    if (auto it = doc.find("stopword_reason"); it != doc.end() && !it->is_null()) {
        entry.stopword_reason = require_string(*it, root.at("stopword_reason"));
    }
    if (auto it = doc.find("metadata"); it != doc.end() && !it->is_null()) {
        const SchemaCursor mc = root.at("metadata");
        if (!it->is_object()) mc.fail("expected object");
        entry.metadata.timestamp = it->value("timestamp", "");
        entry.metadata.schema_version = it->value("schema_version", "");
        if (auto f = it->find("validation_flags"); f != it->end()) {
            entry.metadata.validation_flags = string_list(*f, mc.at("validation_flags"));
        }
    }

    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!is_known_key(it.key())) entry.extras[it.key()] = it.value();
    }
    return entry;
}

LexemeEntry parse_entry(std::string_view line) {
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded()) {
        // Re-parse with exceptions to recover the byte offset.
        try {
            [[maybe_unused]] json reparsed = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(e.what(), e.byte);
        }
        throw ParseError("malformed JSON", 0);
    }
    return entry_from_json(doc);
}

json entry_to_json(const LexemeEntry& entry) {
    json doc = json::object();
    doc["lemma"] = entry.lemma;
    json pos_arr = json::array();
    for (const auto& pe : entry.pos_entries) {
        json e = json::object();
        e["pos"] = std::string(to_string(pe.pos));
        json senses = json::array();
        for (const auto& s : pe.senses) senses.push_back(sense_to_json(s));
        e["senses"] = std::move(senses);
        if (!pe.morphology.empty()) e["morphology"] = morphology_to_json(pe.morphology);
        if (!pe.collocations.empty()) e["collocations"] = pe.collocations;
        pos_arr.push_back(std::move(e));
    }
    doc["pos_entries"] = std::move(pos_arr);
    if (entry.etymology) doc["etymology"] = etymology_to_json(*entry.etymology);
    if (entry.encyclopedia) {
        doc["encyclopedia"] = {{"body", entry.encyclopedia->body},
                               {"word_count", entry.encyclopedia->word_count}};
    }
    if (entry.is_stopword) doc["is_stopword"] = true;
    if (entry.stopword_reason) doc["stopword_reason"] = *entry.stopword_reason;
    const auto& md = entry.metadata;
    if (!md.timestamp.empty() || !md.schema_version.empty() || !md.validation_flags.empty()) {
        json m = json::object();
        if (!md.timestamp.empty()) m["timestamp"] = md.timestamp;
        if (!md.schema_version.empty()) m["schema_version"] = md.schema_version;
        if (!md.validation_flags.empty()) m["validation_flags"] = md.validation_flags;
        doc["metadata"] = std::move(m);
    }
    for (auto it = entry.extras.begin(); it != entry.extras.end(); ++it) {
        doc[it.key()] = it.value();
    }
    return doc;
}

std::string serialize_entry(const LexemeEntry& entry) {
    return entry_to_json(entry).dump();
}

json edge_to_json(const LexemeEdge& edge) {
    json doc = json::object();
    doc["source"] = edge.source;
    doc["target"] = edge.target;
    doc["relation"] = std::string(to_string(edge.relation));
    doc["priority"] = std::string(to_string(edge.priority));
    if (edge.source_pos) doc["pos"] = std::string(to_string(*edge.source_pos));
    if (edge.sense_index) doc["sense_index"] = *edge.sense_index;
    if (edge.weight) doc["weight"] = *edge.weight;
    return doc;
}

LexemeEdge edge_from_json(const json& doc) {
    SchemaCursor root;
    if (!doc.is_object()) root.fail("edge must be a JSON object");
    LexemeEdge edge;
    edge.source = require_string(doc.value("source", json()), root.at("source"));
    edge.target = require_string(doc.value("target", json()), root.at("target"));
    auto rel = parse_edge_type(require_string(doc.value("relation", json()), root.at("relation")));
    if (!rel) root.at("relation").fail("unknown relation");
    edge.relation = *rel;
    if (auto it = doc.find("priority"); it != doc.end()) {
        auto p = parse_edge_priority(require_string(*it, root.at("priority")));
        if (!p) root.at("priority").fail("unknown priority");
        edge.priority = *p;
    } else {
        edge.priority = classify_priority(edge.relation);
    }
    if (auto it = doc.find("pos"); it != doc.end() && !it->is_null()) {
        edge.source_pos = require_pos(*it, root.at("pos"));
    }
    if (auto it = doc.find("sense_index"); it != doc.end() && !it->is_null()) {
        if (!it->is_number_integer()) root.at("sense_index").fail("expected integer");
        edge.sense_index = it->get<std::int32_t>();
    }
    if (auto it = doc.find("weight"); it != doc.end() && !it->is_null()) {
        if (!it->is_number()) root.at("weight").fail("expected number");
        edge.weight = it->get<double>();
    }
    return edge;
}

}  // namespace opengloss
