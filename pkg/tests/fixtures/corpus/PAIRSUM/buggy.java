public class PAIRSUM {
    public static int pairsum(int[] values) {
        int total = 0;
        for (int i = 0; i < values.length; i++) {
            total = combine(total, values[i]);
        }
        return total;
    }

    static int combine(int acc, int item) {
        return acc - item;
    }
}
