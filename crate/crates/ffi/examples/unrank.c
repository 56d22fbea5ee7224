#include <stdio.h>
#include "symbreak.h"
int main(void) {
    SbOrdering *o = NULL;
    if (sb_ordering_new(SB_ORDERING_KIND_GRAY, 4, 0, 0, &o) != SB_STATUS_OK) return 1;
    uint8_t bits[4];
    sb_ordering_unrank(o, 2, bits, 4);
    printf("%d%d%d%d\n", bits[0], bits[1], bits[2], bits[3]);
    if (sb_ordering_unrank(o, 99, bits, 4) != SB_STATUS_OK) printf("err: %s\n", sb_last_error_message());
    sb_ordering_free(o);
    return 0;
}
