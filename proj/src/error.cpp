#include "colexforge/error.hpp"

namespace colexforge {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::MissingFile: return "MissingFile";
        case ErrorKind::MalformedMetadata: return "MalformedMetadata";
        case ErrorKind::MalformedCsv: return "MalformedCsv";
        case ErrorKind::DanglingReference: return "DanglingReference";
        case ErrorKind::DuplicateId: return "DuplicateId";
        case ErrorKind::ChainedExpansion: return "ChainedExpansion";
        case ErrorKind::SingletonExpansionWithExpansionSyntax: return "SingletonExpansionWithExpansionSyntax";
        case ErrorKind::DuplicateSource: return "DuplicateSource";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::EmptySelection: return "EmptySelection";
        case ErrorKind::EmptyAfterNormalization: return "EmptyAfterNormalization";
        case ErrorKind::UnknownConcept: return "UnknownConcept";
        case ErrorKind::UncoveredNode: return "UncoveredNode";
        case ErrorKind::InconsistentInputs: return "InconsistentInputs";
        case ErrorKind::MalformedGml: return "MalformedGml";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace colexforge
