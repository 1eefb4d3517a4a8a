#include <stdio.h>
#include <string.h>

#include "umbral_stats.h"

static int check(UsStatus status, const char *what) {
    if (status != US_STATUS_OK) {
        const char *msg = us_last_error_message();
        fprintf(stderr, "%s failed (%d): %s\n", what, (int)status, msg ? msg : "");
        return 1;
    }
    return 0;
}

int main(void) {
    UsStatistics *be = NULL;
    UsStatistics *dual = NULL;
    UsSeries *w = NULL;
    char *json = NULL;
    int holds = 0;

    if (check(us_statistics_from_catalog("bose-einstein", NULL, 6, &be), "catalog")) return 1;
    if (check(us_statistics_dual(be, &dual), "dual")) return 1;
    if (check(us_statistics_series(dual, US_QUANTITY_WEIGHT, &w), "weight")) return 1;
    if (check(us_series_to_json(w, &json), "json")) return 1;
    printf("%s\n", json);
    if (check(us_main_theorem_check(be, &holds), "theorem")) return 1;
    printf("holds=%d\n", holds);

    us_string_free(json);
    us_series_free(w);
    us_statistics_free(dual);
    us_statistics_free(be);

    if (us_statistics_from_catalog("nope", NULL, 6, &be) != US_STATUS_UNKNOWN_ENTRY) return 1;
    return strstr(us_last_error_message(), "nope") ? 0 : 1;
}
