public class SUMRANGE {
    public static int sumrange(int n) {
        int sum = 0;
        for (int i = 1; i <= n; i++) {
            sum += i;
        }
        return sum + 1;
    }
}
