/* Minimal consumer of the C API: build a product graph, certify a
 * circular forcing number, and print the verdict line. */
#include "forcing.h"

#include <assert.h>
#include <stdio.h>
#include <string.h>

int main(void) {
    ForcingGraph *graph = NULL;
    ForcingStatus status = forcing_graph_build("prod(Kmn:2,2;C:4)", &graph);
    assert(status == FORCING_STATUS_OK);

    size_t vertices = 0, edges = 0;
    status = forcing_graph_counts(graph, &vertices, &edges, NULL, NULL);
    assert(status == FORCING_STATUS_OK);
    printf("product: %zu vertices, %zu edges\n", vertices, edges);
    forcing_graph_free(graph);

    char *report = NULL;
    status = forcing_certify("Kmn:2,2", 2, NULL, 0, 0, &report);
    assert(status == FORCING_STATUS_OK);
    assert(strstr(report, "EXACT f = 4") != NULL);
    printf("certified: EXACT f = 4\n");
    forcing_string_free(report);

    status = forcing_certify("Kmn:2,3", 2, NULL, 0, 0, &report);
    assert(status == FORCING_STATUS_PRECONDITION_FAILED);
    printf("expected failure: %s\n", forcing_last_error());
    forcing_string_free(report);
    return 0;
}
