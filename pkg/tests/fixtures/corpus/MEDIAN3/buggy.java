public class MEDIAN3 {
    public static int median3(int a, int b, int c) {
        if (a == b || a == c) {
            return a;
        }
        if (b != c) {
            return b;
        }
        if (a < b && b < c) {
            return b;
        }
        if (c < b && b < a) {
            return b;
        }
        if (b < a && a < c) {
            return a;
        }
        if (c < a && a < b) {
            return a;
        }
        return c;
    }
}
