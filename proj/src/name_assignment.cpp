#include "mdlseg/name_assignment.hpp"

#include "mdlseg/error.hpp"

#include <algorithm>
#include <cmath>

namespace mdlseg {

namespace {

void check_vector(const FaceVector& v, std::size_t dim, const std::string& where) {
    if (v.size() != dim) {
        throw ValidationError(where + " has dimension " + std::to_string(v.size()) + ", expected " +
                              std::to_string(dim));
    }
    if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); })) {
        throw ValidationError(where + " has a non-finite component");
    }
}

} // namespace

Matrix build_scene_costs(const FaceBank& bank, const SceneFaces& faces) {
    if (bank.characters.empty()) {
        throw ValidationError("face bank has no characters");
    }
    if (bank.characters.front().faces.empty()) {
        throw ValidationError("character '" + bank.characters.front().name + "' has no face vectors");
    }
    const std::size_t dim = bank.characters.front().faces.front().size();
    if (dim == 0) {
        throw ValidationError("face vectors must have dimension >= 1");
    }
    for (const auto& character : bank.characters) {
        if (character.faces.empty()) {
            throw ValidationError("character '" + character.name + "' has no face vectors");
        }
        for (const auto& v : character.faces) {
            check_vector(v, dim, "a face of '" + character.name + "'");
        }
    }
    for (std::size_t j = 0; j < faces.scenes.size(); ++j) {
        for (const auto& v : faces.scenes[j]) {
            check_vector(v, dim, "a face in scene " + std::to_string(j));
        }
    }

    Matrix costs(bank.characters.size(), faces.scenes.size(), kNoFaces);
    for (std::size_t i = 0; i < bank.characters.size(); ++i) {
        for (std::size_t j = 0; j < faces.scenes.size(); ++j) {
            double best = kNoFaces;
            for (const auto& a : bank.characters[i].faces) {
                for (const auto& b : faces.scenes[j]) {
                    double dist2 = 0.0;
                    for (std::size_t c = 0; c < dim; ++c) {
                        dist2 += (a[c] - b[c]) * (a[c] - b[c]);
                    }
                    best = std::min(best, std::sqrt(dist2));
                }
            }
            costs(i, j) = best;
        }
    }
    return costs;
}

SpeakerCosts build_speaker_costs(const Matrix& scene_costs, const std::vector<std::vector<std::size_t>>& incidence) {
    const std::size_t characters = scene_costs.rows();
    const std::size_t scenes = scene_costs.cols();
    SpeakerCosts out{Matrix(characters, incidence.size(), kNoFaces), std::nullopt};
    double finite_sum = 0.0;
    std::size_t finite_count = 0;
    for (std::size_t s = 0; s < incidence.size(); ++s) {
        if (incidence[s].empty()) {
            throw ValidationError("speaker " + std::to_string(s) + " appears in no scene");
        }
        for (std::size_t j : incidence[s]) {
            if (j >= scenes) {
                throw ValidationError("speaker " + std::to_string(s) + " refers to scene " + std::to_string(j) +
                                      " but there are " + std::to_string(scenes));
            }
        }
        for (std::size_t i = 0; i < characters; ++i) {
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t j : incidence[s]) {
                if (std::isfinite(scene_costs(i, j))) {
                    sum += scene_costs(i, j);
                    ++count;
                }
            }
            if (count > 0) {
                out.costs(i, s) = sum / static_cast<double>(count);
                finite_sum += out.costs(i, s);
                ++finite_count;
            }
        }
    }
    if (finite_count > 0) {
        out.threshold = finite_sum / static_cast<double>(finite_count);
    }
    return out;
}

AssignmentProblem make_assignment_problem(const FaceBank& bank, const SceneFaces& faces,
                                          const std::vector<Speaker>& speakers) {
    AssignmentProblem problem;
    for (const auto& c : bank.characters) {
        problem.character_names.push_back(c.name);
    }
    for (const auto& s : speakers) {
        problem.speaker_ids.push_back(s.id);
        problem.incidence.push_back(s.scenes);
    }
    problem.scene_costs = build_scene_costs(bank, faces);
    problem.speaker_costs = build_speaker_costs(problem.scene_costs, problem.incidence);
    return problem;
}

std::vector<std::optional<std::size_t>> assign_speakers(const SpeakerCosts& speaker_costs) {
    const Matrix& c2 = speaker_costs.costs;
    const std::size_t characters = c2.rows();
    const std::size_t speakers = c2.cols();
    std::vector<std::optional<std::size_t>> out(speakers);
    if (characters == 0 || speakers == 0 || !speaker_costs.threshold) {
        return out;
    }

    std::vector<std::size_t> eligible;
    double largest = 0.0;
    for (std::size_t s = 0; s < speakers; ++s) {
        bool any = false;
        for (std::size_t i = 0; i < characters; ++i) {
            if (std::isfinite(c2(i, s))) {
                any = true;
                largest = std::max(largest, std::fabs(c2(i, s)));
            }
        }
        if (any) {
            eligible.push_back(s);
        }
    }
    if (eligible.empty()) {
        return out;
    }

    // Infinite entries become a cost large enough that any assignment using
    // fewer of them is cheaper.
    const double masked = (largest + 1.0) * static_cast<double>(2 * eligible.size() + 1);
    // Copies of one character sit in adjacent columns, so the solver's
    // smallest-column tie-break also picks the smallest character.
    const std::size_t replicas = kIdsPerCharacter * characters;
    Matrix lsap(eligible.size(), replicas);
    for (std::size_t r = 0; r < eligible.size(); ++r) {
        for (std::size_t col = 0; col < replicas; ++col) {
            const double c = c2(col / kIdsPerCharacter, eligible[r]);
            lsap(r, col) = std::isfinite(c) ? c : masked;
        }
    }
    const Assignment solved = hungarian(lsap, Objective::Minimize);
    const double threshold = *speaker_costs.threshold;
    for (std::size_t r = 0; r < eligible.size(); ++r) {
        if (!solved.row_to_col[r]) {
            continue;
        }
        const std::size_t character = *solved.row_to_col[r] / kIdsPerCharacter;
        const double c = c2(character, eligible[r]);
        if (std::isfinite(c) && c < threshold) {
            out[eligible[r]] = character;
        }
    }
    return out;
}

NameAssignment assign_names(const AssignmentProblem& problem) {
    const auto mapping = assign_speakers(problem.speaker_costs);
    NameAssignment out;
    for (std::size_t s = 0; s < mapping.size(); ++s) {
        NameAssignment::Entry entry{problem.speaker_ids.at(s), std::nullopt};
        if (mapping[s]) {
            entry.character = problem.character_names.at(*mapping[s]);
        }
        out.entries.push_back(std::move(entry));
    }
    return out;
}

} // namespace mdlseg
