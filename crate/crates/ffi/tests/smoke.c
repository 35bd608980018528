#include <math.h>
#include <stdio.h>
#include <string.h>

#include "legendre_index.h"

static int fail(const char *what, LiStatus s) {
    char msg[256];
    li_last_error_message(msg, sizeof msg);
    fprintf(stderr, "%s: %s (%s)\n", what, li_status_message(s), msg);
    return 1;
}

int main(void) {
    LiParams *p = NULL;
    LiStatus s = li_params_new(-0.5, &p);
    if (s != LI_STATUS_OK) return fail("params", s);

    double direct = 0.0, mb = 0.0;
    s = li_kernel(p, LI_KERNEL_METHOD_DIRECT, 1.0, 0.5, &direct, NULL);
    if (s != LI_STATUS_OK) return fail("kernel", s);
    s = li_kernel(p, LI_KERNEL_METHOD_MELLIN_BARNES, 1.0, 0.5, &mb, NULL);
    if (s != LI_STATUS_OK) return fail("kernel", s);
    if (fabs(direct - mb) > 1e-10 * fabs(direct)) {
        fprintf(stderr, "routes differ: %.17g vs %.17g\n", direct, mb);
        return 1;
    }

    LiFunction *f = NULL;
    s = li_function_parse("exp_decay(a=1)", &f);
    if (s != LI_STATUS_OK) return fail("parse", s);
    double taus[2] = {0.0, 1.0}, values[2], errs[2];
    s = li_forward_f(f, p, taus, 2, values, errs);
    if (s != LI_STATUS_OK) return fail("forward", s);
    if (!(values[0] > values[1] && values[1] > 0.0)) return 1;

    LiParams *bad = NULL;
    s = li_params_new(0.75, &bad);
    if (s != LI_STATUS_INVALID_PARAMETER || bad != NULL) return 1;
    if (li_last_error_message(NULL, 0) == 0) return 1;

    li_function_free(f);
    li_params_free(p);
    printf("%s %.17g\n", li_version(), direct);
    return 0;
}
