#include "holoq.h"
#include <stdio.h>

int main(void) {
    printf("holoq %s\n", holoq_version());

    double re[9], im[9];
    if (holoq_gate_unitary3(1.5707963267948966, 0.0, re, im) != HOLOQ_STATUS_OK) return 1;
    printf("NOT gate |0><2| element: %f%+fi\n", re[2], im[2]);

    HoloqTrajectory *traj = NULL;
    if (holoq_simulate_holonomic(1.5707963267948966, 0.0, 6.5e-9, 1e-11, 100,
                                 NULL, NULL, &traj) != HOLOQ_STATUS_OK) return 2;
    size_t n = holoq_trajectory_len(traj);
    double t, pops[3];
    if (holoq_trajectory_row(traj, n - 1, &t, pops) != HOLOQ_STATUS_OK) return 3;
    printf("rows=%zu  t_end=%.1f ns  p2=%f\n", n, t * 1e9, pops[2]);
    holoq_trajectory_free(traj);
    return (pops[2] > 0.999) ? 0 : 4;
}
