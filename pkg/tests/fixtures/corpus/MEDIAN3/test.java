public class TEST_MEDIAN3 {
    public static void main(String[] args) {
        if (MEDIAN3.median3(1, 2, 3) != 2) { System.exit(1); }
        if (MEDIAN3.median3(3, 1, 2) != 2) { System.exit(1); }
        if (MEDIAN3.median3(5, 5, 1) != 5) { System.exit(1); }
        if (MEDIAN3.median3(4, 2, 2) != 2) { System.exit(1); }
    }
}
