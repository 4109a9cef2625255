#include "agemap/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "agemap/errors.hpp"

namespace agemap {

namespace {

using json = nlohmann::json;

// Multi-byte UTF-8 validation; returns the byte offset of the first bad
// sequence or npos.
std::size_t find_invalid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto b0 = static_cast<unsigned char>(s[i]);
        std::size_t len;
        if (b0 < 0x80) {
            len = 1;
        } else if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            if (b0 < 0xC2) return i;  // overlong
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            if (b0 > 0xF4) return i;  // beyond U+10FFFF
        } else {
            return i;
        }
        if (i + len > s.size()) return i;
        for (std::size_t k = 1; k < len; ++k) {
            if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return i;
        }
        i += len;
    }
    return std::string_view::npos;
}

std::string_view strip_bom(std::string_view s) {
    if (s.size() >= 3 && s.substr(0, 3) == "\xEF\xBB\xBF") return s.substr(3);
    return s;
}

bool is_tag_line(std::string_view line) {
    return line.size() >= 2 && std::isupper(static_cast<unsigned char>(line[0])) &&
           (std::isupper(static_cast<unsigned char>(line[1])) ||
            std::isdigit(static_cast<unsigned char>(line[1]))) &&
           (line.size() == 2 || line[2] == ' ');
}

std::string_view line_payload(std::string_view line) {
    return line.size() > 3 ? line.substr(3) : std::string_view{};
}

std::vector<RawRecord> parse_wos(std::string_view text) {
    std::vector<RawRecord> records;
    RawRecord current;
    bool in_record = false;
    std::string last_tag;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                              : nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;

        if (line.rfind("PT", 0) == 0 && is_tag_line(line)) {
            if (in_record)
                throw MalformedRecord("record without ER terminator", current.start_line);
            in_record = true;
            current = RawRecord{};
            current.start_line = line_no;
            current.fields.push_back({"PT", std::string(line_payload(line)), line_no});
            last_tag = "PT";
        } else if (in_record) {
            if (line.rfind("ER", 0) == 0 && is_tag_line(line)) {
                records.push_back(std::move(current));
                in_record = false;
                last_tag.clear();
            } else if (line.rfind("EF", 0) == 0 && is_tag_line(line)) {
                throw MalformedRecord("record without ER terminator", current.start_line);
            } else if (is_tag_line(line)) {
                last_tag.assign(line.substr(0, 2));
                current.fields.push_back({last_tag, std::string(line_payload(line)), line_no});
            } else if (!line.empty() && (line[0] == ' ' || line[0] == '\t')) {
                // continuation line, attaches to the preceding tag
                current.fields.push_back({last_tag, std::string(line_payload(line)), line_no});
            }
            // blank or stray lines inside records are ignored
        }
        // content before the first PT (FN/VR preamble) is ignored

        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    if (in_record) throw MalformedRecord("record without ER terminator", current.start_line);
    return records;
}

// RFC-4180-ish row splitter handling quoted cells and embedded newlines.
std::vector<std::vector<std::string>> parse_csv_rows(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    bool any = false;

    auto end_cell = [&] {
        row.push_back(std::move(cell));
        cell.clear();
    };
    auto end_row = [&] {
        end_cell();
        rows.push_back(std::move(row));
        row.clear();
        any = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
            continue;
        }
        switch (c) {
            case '"': quoted = true; any = true; break;
            case ',': end_cell(); any = true; break;
            case '\r': break;
            case '\n':
                if (any || !cell.empty() || !row.empty()) end_row();
                break;
            default: cell += c; any = true; break;
        }
    }
    if (any || !cell.empty() || !row.empty()) end_row();
    return rows;
}

std::vector<RawRecord> parse_csv(std::string_view text, const CsvMapping& mapping) {
    const auto rows = parse_csv_rows(text);
    if (rows.empty()) return {};

    const auto& header = rows.front();
    auto col_of = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == name) return c;
        return std::nullopt;
    };
    const auto id_col = col_of(mapping.id_column);
    const auto year_col = col_of(mapping.year_column);
    const auto refs_col = col_of(mapping.refs_column);
    const auto title_col = col_of(mapping.title_column);
    const auto source_col = col_of(mapping.source_column);
    if (!id_col || !year_col || !refs_col)
        throw MalformedRecord("CSV header lacks one of the configured id/year/references columns",
                              1);

    std::vector<RawRecord> records;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& cells = rows[r];
        auto cell = [&](std::optional<std::size_t> c) -> std::string {
            return c && *c < cells.size() ? cells[*c] : std::string{};
        };
        RawRecord rec;
        rec.start_line = r + 1;
        rec.fields.push_back({"UT", cell(id_col), r + 1});
        rec.fields.push_back({"PY", cell(year_col), r + 1});
        if (title_col) rec.fields.push_back({"TI", cell(title_col), r + 1});
        if (source_col) rec.fields.push_back({"SO", cell(source_col), r + 1});
        std::string refs = cell(refs_col);
        std::size_t pos = 0;
        while (pos <= refs.size()) {
            auto sep = refs.find(';', pos);
            std::string one = refs.substr(pos, sep == std::string::npos ? std::string::npos
                                                                        : sep - pos);
            // trim
            const auto b = one.find_first_not_of(" \t");
            if (b != std::string::npos) {
                const auto e = one.find_last_not_of(" \t");
                rec.fields.push_back({"CR", one.substr(b, e - b + 1), r + 1});
            }
            if (sep == std::string::npos) break;
            pos = sep + 1;
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::string join_lines(const RawRecord& rec, const char* tag) {
    std::string out;
    for (const auto& f : rec.fields) {
        if (f.tag != tag) continue;
        if (!out.empty()) out += ' ';
        out += f.text;
    }
    return out;
}

const std::string* first_line(const RawRecord& rec, const char* tag) {
    for (const auto& f : rec.fields)
        if (f.tag == tag) return &f.text;
    return nullptr;
}

} // namespace

std::vector<RawRecord> parse_export(std::string_view bytes, ExportFormat format,
                                    const CsvMapping& mapping) {
    bytes = strip_bom(bytes);
    if (const auto bad = find_invalid_utf8(bytes); bad != std::string_view::npos)
        throw EncodingError("input is not valid UTF-8 (byte offset " + std::to_string(bad) + ")");
    return format == ExportFormat::wos_plaintext ? parse_wos(bytes) : parse_csv(bytes, mapping);
}

std::string canonicalize_reference(std::string_view raw) {
    std::string s;
    s.reserve(raw.size());
    bool pending_space = false;
    for (const char c : raw) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            pending_space = !s.empty();
        } else {
            if (pending_space) s += ' ';
            pending_space = false;
            s += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        }
    }
    // strip a trailing ", DOI ..." segment
    if (const auto pos = s.rfind(", DOI"); pos != std::string::npos &&
        (pos + 5 == s.size() || s[pos + 5] == ' ')) {
        s.erase(pos);
    }
    while (!s.empty() && (s.back() == '.' || s.back() == ' ')) s.pop_back();
    return s;
}

std::optional<int> parse_ref_year(std::string_view citation) {
    std::size_t pos = 0;
    while (pos <= citation.size()) {
        auto comma = citation.find(',', pos);
        auto token = citation.substr(pos, comma == std::string_view::npos ? citation.size() - pos
                                                                          : comma - pos);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        if (token.size() == 4 &&
            std::all_of(token.begin(), token.end(),
                        [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            const int y = (token[0] - '0') * 1000 + (token[1] - '0') * 100 +
                          (token[2] - '0') * 10 + (token[3] - '0');
            if (y >= kYearMin && y <= kYearMax) return y;
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return std::nullopt;
}

ReferenceKey make_reference_key(std::string_view raw) {
    ReferenceKey key;
    key.raw = std::string(raw);
    key.canonical = canonicalize_reference(raw);
    key.pub_year = parse_ref_year(key.canonical);
    return key;
}

Document to_document(const RawRecord& rec) {
    Document doc;

    if (const auto* ut = first_line(rec, "UT"); ut && !ut->empty()) {
        doc.doc_id = *ut;
    } else {
        // deterministic fallback identity for exports without UT
        std::string id;
        if (const auto* au = first_line(rec, "AU")) id = canonicalize_reference(*au);
        if (const auto* py = first_line(rec, "PY")) {
            if (!id.empty()) id += ", ";
            id += *py;
        }
        doc.doc_id = id.empty() ? "L" + std::to_string(rec.start_line) : id;
    }

    const auto* py = first_line(rec, "PY");
    std::optional<int> year;
    if (py) {
        std::string t = *py;
        const auto b = t.find_first_not_of(" \t");
        const auto e = t.find_last_not_of(" \t");
        if (b != std::string::npos) t = t.substr(b, e - b + 1);
        if (t.size() == 4 && std::all_of(t.begin(), t.end(), [](char c) {
                return std::isdigit(static_cast<unsigned char>(c));
            })) {
            const int y = std::stoi(t);
            if (y >= kYearMin && y <= kYearMax) year = y;
        }
    }
    if (!year)
        throw MissingYear("record '" + doc.doc_id + "' has no publication year in [" +
                          std::to_string(kYearMin) + ", " + std::to_string(kYearMax) + "]");
    doc.pub_year = *year;

    doc.title = join_lines(rec, "TI");
    doc.source = join_lines(rec, "SO");

    std::unordered_set<std::string> seen;
    for (const auto& f : rec.fields) {
        if (f.tag != "CR" || f.text.empty()) continue;
        auto key = make_reference_key(f.text);
        if (key.canonical.empty()) continue;
        if (seen.insert(key.canonical).second) doc.references.push_back(std::move(key));
    }
    return doc;
}

std::vector<Document> load_documents(std::string_view bytes, ExportFormat format,
                                     IngestReport& report, const CsvMapping& mapping) {
    const auto records = parse_export(bytes, format, mapping);
    std::vector<Document> docs;
    docs.reserve(records.size());
    std::unordered_set<std::string> ids;
    std::unordered_set<std::string> yearless;

    for (const auto& rec : records) {
        Document doc;
        try {
            doc = to_document(rec);
        } catch (const MissingYear& e) {
            const auto* ut = first_line(rec, "UT");
            report.skipped.push_back({rec.start_line, ut ? *ut : "", e.what()});
            continue;
        }
        if (!ids.insert(doc.doc_id).second) {
            report.duplicate_doc_ids.push_back(doc.doc_id);
            continue;
        }
        for (const auto& ref : doc.references) {
            if (!ref.pub_year && yearless.insert(ref.canonical).second &&
                report.yearless_examples.size() < 20)
                report.yearless_examples.push_back(ref.canonical);
        }
        docs.push_back(std::move(doc));
    }
    report.records_parsed = records.size();
    report.yearless_reference_count = yearless.size();
    return docs;
}

void write_corpus_jsonl(std::ostream& out, const std::vector<Document>& docs) {
    for (const auto& doc : docs) {
        json refs = json::array();
        for (const auto& r : doc.references) {
            json jr{{"canonical", r.canonical}, {"raw", r.raw}};
            if (r.pub_year)
                jr["pub_year"] = *r.pub_year;
            else
                jr["pub_year"] = nullptr;
            refs.push_back(std::move(jr));
        }
        const json line{{"doc_id", doc.doc_id}, {"pub_year", doc.pub_year},
                        {"title", doc.title},   {"source", doc.source},
                        {"references", std::move(refs)}};
        out << line.dump() << '\n';
    }
}

std::vector<Document> read_corpus_jsonl(std::istream& in) {
    std::vector<Document> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw IoError("corpus line " + std::to_string(line_no) + ": " + e.what());
        }
        Document doc;
        try {
            doc.doc_id = j.at("doc_id").get<std::string>();
            doc.pub_year = j.at("pub_year").get<int>();
            doc.title = j.value("title", std::string{});
            doc.source = j.value("source", std::string{});
            for (const auto& jr : j.at("references")) {
                ReferenceKey r;
                r.canonical = jr.at("canonical").get<std::string>();
                r.raw = jr.value("raw", r.canonical);
                if (jr.contains("pub_year") && !jr["pub_year"].is_null())
                    r.pub_year = jr["pub_year"].get<int>();
                doc.references.push_back(std::move(r));
            }
        } catch (const json::exception& e) {
            throw IoError("corpus line " + std::to_string(line_no) + ": " + e.what());
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

} // namespace agemap
