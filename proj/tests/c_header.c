/* The public header must compile as C; exercises a handful of calls. */
#include <stdio.h>

#include "tailsum/tailsum.h"

int main(void) {
    ts_model* m = NULL;
    ts_expansion e;
    if (ts_model_create(2.0, 1.0, TS_FAMILY_INDEPENDENCE, 0.0, &m) != TS_OK) return 1;
    if (ts_tailprob_expansion(m, 99.0, &e) != TS_OK) return 1;
    ts_model_destroy(m);
    printf("%s %.6g %s\n", ts_version(), e.value, e.case_label);
    return e.value > 2.0e-4 && e.value < 2.1e-4 ? 0 : 1;
}
