#include <stdio.h>
#include <string.h>

#include "rauzy_lab.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    RlIet *t = NULL;
    CHECK(rl_iet_new("[4,3,2,1]", "silver", &t) == RL_STATUS_OK);
    CHECK(rl_iet_n(t) == 4);

    RlTrace *trace = NULL;
    CHECK(rl_iet_drive(t, "alternate", 30, &trace) == RL_STATUS_OK);
    size_t k = 0;
    CHECK(rl_trace_first_positive_window(trace, 1, &k) == RL_STATUS_OK);
    CHECK(k > 0);

    char *json = rl_trace_to_json(trace);
    CHECK(json != NULL);
    RlReport *report = NULL;
    CHECK(rl_recover(json, "strict", &report) == RL_STATUS_OK);
    rl_string_free(json);
    CHECK(rl_report_candidate_count(report) == 1);
    size_t img[4];
    CHECK(rl_report_candidate(report, 0, img, 4) == RL_STATUS_OK);
    CHECK(img[0] == 4 && img[1] == 3 && img[2] == 2 && img[3] == 1);

    RlIet *bad = NULL;
    CHECK(rl_iet_new("[1,2]", "golden", &bad) == RL_STATUS_REDUCIBLE);
    CHECK(bad == NULL);
    CHECK(strncmp(rl_last_error(), "reducible", 9) == 0);

    const char *argv[] = {"rauzy-lab", "verify", "--suite", "sigma", "--n", "3"};
    int code = -1;
    char *out = rl_run(6, argv, &code);
    CHECK(code == 0);
    CHECK(strstr(out, "\"failures\":[]") != NULL);
    rl_string_free(out);

    rl_report_free(report);
    rl_trace_free(trace);
    rl_iet_free(t);
    printf("ok %s\n", rl_version());
    return 0;
}
