/* Minimal linkage check for the C surface.
 *
 *   cc -std=c99 -Wall -Wextra -Werror -I include smoke.c \
 *      -L ../../target/debug -lmeanlab_ffi -lm -o smoke
 *   LD_LIBRARY_PATH=../../target/debug ./smoke
 */
#include <stdio.h>
#include <string.h>
#include "meanlab.h"

int main(void) {
    double v = 0.0;
    if (ml_mean("C", 3.0, 4.0, &v) != ML_STATUS_OK) return 1;
    if (v < 3.571428 || v > 3.571429) return 2;

    MlCtx *ctx = ml_ctx_new(30, 0.0, 0.0);
    if (!ctx) return 3;
    if (ml_s_mean(ctx, "G", 3.0, 4.0, &v) != ML_STATUS_OK) return 4;
    if (v < 3.386966 || v > 3.386967) return 5;

    char buf[256];
    size_t needed = 0;
    if (ml_expr_eval_decimal(ctx, "N0", 0.5, 0.2, buf, sizeof buf, &needed) != ML_STATUS_OK) return 6;
    /* The inputs are doubles, so digits past the binary representation of
     * 0.2 are not comparable against exact-decimal references. */
    if (strncmp(buf, "3.4713990743214899", 18) != 0) {
        fprintf(stderr, "decimal: %s\n", buf);
        return 7;
    }

    if (ml_mean("bogus", 1.0, 2.0, &v) != ML_STATUS_INVALID_ARGUMENT) return 8;
    size_t len = ml_last_error(buf, sizeof buf);
    if (len == 0 || strstr(buf, "bogus") == NULL) return 9;

    uint64_t violations = 99;
    if (ml_verify_chain(NULL, "classical", 500, 42, &violations) != ML_STATUS_OK) return 10;
    if (violations != 0) return 11;

    ml_ctx_free(ctx);
    printf("C smoke: ok (version %s)\n", ml_version());
    return 0;
}
