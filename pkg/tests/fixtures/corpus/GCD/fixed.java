public class GCD {
    public static int gcd(int a, int b) {
        int x = a;
        int y = b;
        while (y != 0) {
            int rem = x % y;
            x = y;
            y = rem;
        }
        return x;
    }
}
