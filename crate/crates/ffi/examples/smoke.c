#include <stdint.h>
#include <stdio.h>

#include "qubopress.h"

int main(void) {
    const double values[9] = {-1.0, 0.4, 1.0, 0.0, 0.4, -0.8, 0.0, 0.0, -1.5};
    QpQubo *q = NULL;
    if (qp_qubo_from_dense(3, values, &q) != QP_STATUS_OK) {
        fprintf(stderr, "%s\n", qp_last_error_message());
        return 1;
    }

    double min_value = 0.0;
    uint64_t masks[4];
    size_t count = 0;
    if (qp_qubo_solve(q, &min_value, masks, 4, &count) != QP_STATUS_OK || count != 1 || masks[0] != 6) {
        return 2;
    }

    QpCompressOptions opts = qp_compress_options_default();
    opts.heuristic = QP_HEURISTIC_M;
    opts.max_iterations = 10;
    QpQubo *c = NULL;
    double dr = 0.0;
    bool included = false;
    if (qp_compress(q, &opts, &c, &dr) != QP_STATUS_OK || qp_optimum_included(c, q, &included) != QP_STATUS_OK || !included) {
        return 3;
    }
    if (qp_qubo_set(q, 2, 1, 1.0) != QP_STATUS_INDEX_OUT_OF_RANGE) {
        return 4;
    }

    printf("min %.3f dr %.4f version %s\n", min_value, dr, qp_version());
    qp_qubo_free(c);
    qp_qubo_free(q);
    return 0;
}
