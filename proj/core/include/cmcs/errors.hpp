#pragma once

#include <stdexcept>
#include <string>

namespace cmcs {

// Every failure the library can raise maps to exactly one kind, and every
// kind maps to one CLI exit code (2 config, 3 data, 4 fit, 5 trial budget).
enum class ErrorKind {
    Config,
    Schema,
    Parse,
    Ordering,
    Range,
    InsufficientData,
    EmptySelection,
    RankDeficient,
    Divergence,
    Domain,
    Binding,
    ModelEval,
    TrialBudget,
    Selection,
    MissingFile,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    int exit_code() const {
        switch (kind_) {
            case ErrorKind::Config:
            case ErrorKind::Binding:
                return 2;
            case ErrorKind::Schema:
            case ErrorKind::Parse:
            case ErrorKind::Ordering:
            case ErrorKind::Range:
            case ErrorKind::InsufficientData:
            case ErrorKind::EmptySelection:
            case ErrorKind::Domain:
            case ErrorKind::MissingFile:
                return 3;
            case ErrorKind::RankDeficient:
            case ErrorKind::Divergence:
            case ErrorKind::Selection:
            case ErrorKind::ModelEval:
                return 4;
            case ErrorKind::TrialBudget:
                return 5;
        }
        return 1;
    }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace cmcs
