/* Solves example 1 on a 40 x 40 mesh and prints a summary. */
#include <stdio.h>
#include <stdlib.h>

#include "hj_sweep.h"

int main(void) {
    HjOptions opts;
    hj_options_default(&opts);
    opts.approach = 2;

    HjSolution *sol = NULL;
    HjStatus st = hj_solve("ex1", 40, &opts, &sol);
    if (st != HJ_STATUS_OK) {
        char msg[256];
        hj_last_error(msg, sizeof msg);
        fprintf(stderr, "%s: %s\n", hj_status_message(st), msg);
        return 1;
    }

    HjSolveInfo info;
    hj_solution_info(sol, &info);
    double *phi = malloc(info.n * info.n * sizeof *phi);
    hj_solution_copy_field(sol, HJ_FIELD_PHI, phi, info.n * info.n);
    printf("n=%zu iterations=%zu converged=%d l1=%.3e phi[0]=%.6f\n",
           info.n, info.iterations, (int)info.converged, info.l1_error, phi[0]);

    free(phi);
    hj_solution_free(sol);
    return 0;
}
