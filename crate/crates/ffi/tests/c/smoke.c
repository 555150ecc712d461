#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "minsurf.h"

#define CHECK(cond)                                                  \
    do {                                                             \
        if (!(cond)) {                                               \
            char msg[256];                                           \
            ms_last_error(msg, sizeof msg);                          \
            fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond, msg); \
            return 1;                                                \
        }                                                            \
    } while (0)

int main(void) {
    size_t count = 0;
    CHECK(ms_catalog_count(&count) == MS_STATUS_OK && count >= 20);

    MsSurface *s = NULL;
    CHECK(ms_surface_from_catalog("spacelike-catenoid-1st-kind", &s) == MS_STATUS_OK);
    double x[3];
    CHECK(ms_surface_eval(s, 1.0, 0.0, x) == MS_STATUS_OK);
    CHECK(fabs(x[0] - sinh(1.0)) < 1e-12 && fabs(x[1]) < 1e-12 && fabs(x[2] - 1.0) < 1e-12);

    size_t needed = 0;
    int pass = 0;
    CHECK(ms_surface_verify(s, &pass, NULL, 0, &needed) == MS_STATUS_BUFFER_TOO_SMALL);
    char *report = malloc(needed);
    CHECK(ms_surface_verify(s, &pass, report, needed, &needed) == MS_STATUS_OK && pass == 1);
    CHECK(strstr(report, "[verdict]") != NULL);
    free(report);
    ms_surface_free(s);

    CHECK(ms_surface_from_catalog("nope", &s) == MS_STATUS_UNKNOWN_SURFACE && s == NULL);

    MsExpr *e = NULL;
    CHECK(ms_expr_parse("cosh(z)", MS_ALGEBRA_LORENTZ, &e) == MS_STATUS_OK);
    double v[2], d[2];
    CHECK(ms_expr_eval(e, 0.3, 0.2, v, d) == MS_STATUS_OK);
    /* cosh(a + tau b) = cosh a cosh b + tau sinh a sinh b */
    CHECK(fabs(v[0] - cosh(0.3) * cosh(0.2)) < 1e-14 && fabs(v[1] - sinh(0.3) * sinh(0.2)) < 1e-14);
    CHECK(fabs(d[0] - sinh(0.3) * cosh(0.2)) < 1e-14 && fabs(d[1] - cosh(0.3) * sinh(0.2)) < 1e-14);
    ms_expr_free(e);

    CHECK(ms_expr_parse("i*z", MS_ALGEBRA_LORENTZ, &e) == MS_STATUS_PARSE_ERROR);
    puts("ok");
    return 0;
}
