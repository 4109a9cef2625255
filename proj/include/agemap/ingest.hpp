#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agemap/types.hpp"

namespace agemap {

enum class ExportFormat { wos_plaintext, csv };

/// One physical field line with its effective 2-letter tag. Continuation
/// lines repeat the tag of the line they attach to, so a multi-line field
/// (CR, AU, ...) appears as consecutive entries under the same tag.
struct FieldLine {
    std::string tag;
    std::string text;
    std::size_t line_no = 0;  // 1-based position in the input
};

struct RawRecord {
    std::vector<FieldLine> fields;
    std::size_t start_line = 0;
};

/// Column mapping for CSV ingestion. The references cell is a
/// semicolon-separated list of citation strings.
struct CsvMapping {
    std::string id_column = "doc_id";
    std::string year_column = "year";
    std::string refs_column = "references";
    std::string title_column = "title";
    std::string source_column = "source";
};

std::vector<RawRecord> parse_export(std::string_view bytes, ExportFormat format,
                                    const CsvMapping& mapping = {});

/// Throws MissingYear when the record has no publication year inside the
/// sanity window; the corpus loader treats that as a reported skip.
Document to_document(const RawRecord& rec);

/// Uppercase, whitespace collapsed, trailing ", DOI ..." segment stripped,
/// trailing periods trimmed. Idempotent.
std::string canonicalize_reference(std::string_view raw);

/// First comma-delimited token that is a 4-digit integer within the sanity
/// window; nullopt when none qualifies.
std::optional<int> parse_ref_year(std::string_view citation);

ReferenceKey make_reference_key(std::string_view raw);

struct SkippedRecord {
    std::size_t start_line = 0;
    std::string id_hint;   // best-effort identity of the skipped record
    std::string reason;
};

struct IngestReport {
    std::size_t records_parsed = 0;
    std::vector<SkippedRecord> skipped;
    std::vector<std::string> duplicate_doc_ids;   // dropped, first kept
    std::size_t yearless_reference_count = 0;     // distinct canonicals
    std::vector<std::string> yearless_examples;   // capped sample
};

/// parse_export + to_document over a whole byte stream. Records without a
/// parseable year are skipped and reported; duplicate doc_ids keep the
/// first occurrence.
std::vector<Document> load_documents(std::string_view bytes, ExportFormat format,
                                     IngestReport& report, const CsvMapping& mapping = {});

void write_corpus_jsonl(std::ostream& out, const std::vector<Document>& docs);
std::vector<Document> read_corpus_jsonl(std::istream& in);

} // namespace agemap
