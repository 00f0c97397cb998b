#include <stdio.h>
#include <string.h>

#include "sizematch.h"

#define CHECK(cond)                                                  \
    do {                                                             \
        if (!(cond)) {                                               \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                                \
        }                                                            \
    } while (0)

int main(void) {
    const double values[] = {0.0, 2.0, 1.0, 3.0, 0.0};
    const size_t edges[] = {0, 1, 1, 2, 2, 3, 3, 4};
    SmSizePair *sp = NULL;
    CHECK(sm_sizepair_new(values, 5, edges, 4, &sp) == SM_STATUS_OK);

    SmDiagram *d = NULL;
    CHECK(sm_diagram_extract(sp, &d) == SM_STATUS_OK);
    CHECK(sm_diagram_point_count(d) == 2);
    CHECK(sm_diagram_infinity_x(d) == 0.0);

    char *json = sm_diagram_to_json(d);
    CHECK(json != NULL);
    CHECK(strcmp(json, "{\"infinity_x\":0.0,\"points\":[[0.0,3.0,1],[1.0,2.0,1]]}") == 0);
    sm_string_free(json);

    const double xs[] = {1.0};
    const double ys[] = {3.0};
    const size_t mults[] = {1};
    SmDiagram *lone = NULL;
    CHECK(sm_diagram_new(0.0, xs, ys, mults, 1, &lone) == SM_STATUS_OK);
    SmDiagram *empty = NULL;
    CHECK(sm_diagram_new(0.0, NULL, NULL, NULL, 0, &empty) == SM_STATUS_OK);
    double dist = -1.0;
    CHECK(sm_matching_distance(lone, empty, &dist) == SM_STATUS_OK);
    CHECK(dist == 1.0);

    const double bad_ys[] = {0.5};
    SmDiagram *bad = NULL;
    CHECK(sm_diagram_new(0.0, xs, bad_ys, mults, 1, &bad) == SM_STATUS_OUTSIDE_HALF_PLANE);
    CHECK(bad == NULL);
    CHECK(strlen(sm_last_error()) > 0);

    sm_diagram_free(empty);
    sm_diagram_free(lone);
    sm_diagram_free(d);
    sm_sizepair_free(sp);
    puts("ok");
    return 0;
}
