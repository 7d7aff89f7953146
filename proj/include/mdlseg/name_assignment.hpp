#pragma once

// Replaces anonymous diarization speaker IDs with character names. A
// character's cost for a scene is the closest face match between its
// reference images and the faces seen in that scene; its cost for a speaker
// is the mean over the scenes the speaker talks in. Speakers are then
// matched to characters (up to three IDs each) and kept only when the cost
// beats the average character/speaker cost.

#include "mdlseg/hungarian.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace mdlseg {

using FaceVector = std::vector<double>;

/// Scene cost when the scene has no detected faces.
inline constexpr double kNoFaces = std::numeric_limits<double>::infinity();
/// Speaker IDs one character can absorb (diarization over-splits).
inline constexpr std::size_t kIdsPerCharacter = 3;

struct CharacterFaces {
    std::string name;
    std::vector<FaceVector> faces;
};

struct FaceBank {
    std::vector<CharacterFaces> characters;
};

/// Detected face vectors per scene; a scene may have none.
struct SceneFaces {
    std::vector<std::vector<FaceVector>> scenes;
};

struct Speaker {
    std::string id;
    std::vector<std::size_t> scenes;
};

/// C1: characters x scenes, min Euclidean distance between a character
/// image and a face in the scene, kNoFaces for faceless scenes. Throws
/// ValidationError on a character without faces, a non-finite value or a
/// dimension mismatch.
Matrix build_scene_costs(const FaceBank& bank, const SceneFaces& faces);

struct SpeakerCosts {
    Matrix costs;                      // C2: characters x speakers
    std::optional<double> threshold;   // mean of finite C2 entries
};

/// C2[i][s] = mean of C1[i][j] over the scenes j of speaker s, skipping
/// faceless scenes (all faceless gives kNoFaces). Throws ValidationError for
/// a speaker with no scenes or a scene index out of range.
SpeakerCosts build_speaker_costs(const Matrix& scene_costs, const std::vector<std::vector<std::size_t>>& incidence);

struct AssignmentProblem {
    std::vector<std::string> character_names;
    std::vector<std::string> speaker_ids;
    Matrix scene_costs;
    std::vector<std::vector<std::size_t>> incidence;
    SpeakerCosts speaker_costs;
};

AssignmentProblem make_assignment_problem(const FaceBank& bank, const SceneFaces& faces,
                                          const std::vector<Speaker>& speakers);

/// Character index per speaker, nullopt for UNASSIGNED. Replicates every
/// character kIdsPerCharacter times, solves the assignment of speakers to
/// replicas, then keeps a pair only if its C2 entry is below the threshold.
/// Speakers with no finite cost do not take part.
std::vector<std::optional<std::size_t>> assign_speakers(const SpeakerCosts& speaker_costs);

struct NameAssignment {
    struct Entry {
        std::string speaker_id;
        std::optional<std::string> character;  // nullopt = UNASSIGNED
    };
    std::vector<Entry> entries;
};

NameAssignment assign_names(const AssignmentProblem& problem);

} // namespace mdlseg
