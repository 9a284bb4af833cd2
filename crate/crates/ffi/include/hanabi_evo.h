#ifndef HANABI_EVO_H
#define HANABI_EVO_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HanabiActionKind {
  HANABI_ACTION_KIND_PLAY = 0,
  HANABI_ACTION_KIND_DISCARD = 1,
  HANABI_ACTION_KIND_TELL_COLOR = 2,
  HANABI_ACTION_KIND_TELL_VALUE = 3,
} HanabiActionKind;

typedef enum HanabiStatus {
  HANABI_STATUS_OK = 0,
  HANABI_STATUS_NULL_POINTER = 1,
  HANABI_STATUS_INVALID_ARGUMENT = 2,
  HANABI_STATUS_ILLEGAL_ACTION = 3,
  HANABI_STATUS_PARSE_ERROR = 4,
  HANABI_STATUS_IO_ERROR = 5,
  HANABI_STATUS_GAME_OVER = 6,
  HANABI_STATUS_PANIC = 7,
} HanabiStatus;

typedef struct HanabiAgent HanabiAgent;

/**
 * A game plus the random stream its agents draw decisions from.
 */
typedef struct HanabiGame HanabiGame;

/**
 * `slot` is used by plays and discards; `target` and `value` by tells.
 * Colors are numbered B=0, R=1, Y=2, W=3, G=4; values run 1..=5.
 */
typedef struct HanabiAction {
  enum HanabiActionKind kind;
  uint32_t slot;
  uint32_t target;
  uint32_t value;
} HanabiAction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *hanabi_last_error(void);

/**
 * Deals a new game.
 *
 * # Safety
 * `out` must be a valid pointer to write a handle to.
 */
enum HanabiStatus hanabi_game_new(uint32_t players, uint64_t seed, struct HanabiGame **out);

/**
 * # Safety
 * `game` must come from [`hanabi_game_new`] and not be freed yet; null is ignored.
 */
void hanabi_game_free(struct HanabiGame *game);

/**
 * Applies an action for the current player.
 *
 * # Safety
 * `game` must be a live handle.
 */
enum HanabiStatus hanabi_game_apply(struct HanabiGame *game, struct HanabiAction action);

/**
 * Parses and applies an action written like `play 0`, `discard 3`,
 * `tell 1 R` or `tell 1 3`.
 *
 * # Safety
 * `game` must be a live handle and `text` a nul-terminated string.
 */
enum HanabiStatus hanabi_game_apply_text(struct HanabiGame *game, const char *text);

/**
 * Current score, or -1 for a null handle.
 *
 * # Safety
 * `game` must be a live handle or null.
 */
int32_t hanabi_game_score(const struct HanabiGame *game);

/**
 * 1 if the game is over, 0 if not, -1 for a null handle.
 *
 * # Safety
 * `game` must be a live handle or null.
 */
int32_t hanabi_game_is_terminal(const struct HanabiGame *game);

/**
 * # Safety
 * `game` must be a live handle or null.
 */
int32_t hanabi_game_current_player(const struct HanabiGame *game);

/**
 * # Safety
 * `game` must be a live handle or null.
 */
int32_t hanabi_game_hint_tokens(const struct HanabiGame *game);

/**
 * # Safety
 * `game` must be a live handle or null.
 */
int32_t hanabi_game_lives(const struct HanabiGame *game);

/**
 * # Safety
 * `game` must be a live handle or null.
 */
int32_t hanabi_game_deck_len(const struct HanabiGame *game);

/**
 * Event history in the line format of the CLI. Free with [`hanabi_string_free`].
 *
 * # Safety
 * `game` must be a live handle and `out` a valid pointer.
 */
enum HanabiStatus hanabi_game_history(const struct HanabiGame *game, char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed yet; null is ignored.
 */
void hanabi_string_free(char *s);

/**
 * Loads an agent from the text of an agent file.
 *
 * # Safety
 * `text` must be nul-terminated and `out` a valid pointer.
 */
enum HanabiStatus hanabi_agent_from_toml(const char *text, struct HanabiAgent **out);

/**
 * One of the bundled baseline agents, by name (case-insensitive).
 *
 * # Safety
 * `name` must be nul-terminated and `out` a valid pointer.
 */
enum HanabiStatus hanabi_agent_preset(const char *name, struct HanabiAgent **out);

/**
 * # Safety
 * `agent` must come from this library and not be freed yet; null is ignored.
 */
void hanabi_agent_free(struct HanabiAgent *agent);

/**
 * Chooses an action for the current player of `game` without applying it.
 * Random choices draw from the game's own stream.
 *
 * # Safety
 * `agent` and `game` must be live handles, `out` a valid pointer.
 */
enum HanabiStatus hanabi_agent_act(struct HanabiAgent *agent,
                                   struct HanabiGame *game,
                                   struct HanabiAction *out);

/**
 * Mirror (`mixed = 0`) or mixed (`mixed = 1`) evaluation over the given
 * game sizes, `n` games per size and pairing.
 *
 * # Safety
 * `agent` must be a live handle, `sizes` must point to `num_sizes`
 * integers, and `out_mean`, `out_sem` must be valid pointers.
 */
enum HanabiStatus hanabi_agent_evaluate(const struct HanabiAgent *agent,
                                        int32_t mixed,
                                        const uint32_t *sizes,
                                        size_t num_sizes,
                                        uint32_t n,
                                        uint64_t seed,
                                        double *out_mean,
                                        double *out_sem);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HANABI_EVO_H */
