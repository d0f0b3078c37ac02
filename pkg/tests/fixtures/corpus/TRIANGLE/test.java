public class TEST_TRIANGLE {
    public static void main(String[] args) {
        if (!TRIANGLE.triangle(3, 4, 5)) { System.exit(1); }
        if (TRIANGLE.triangle(1, 2, 3)) { System.exit(1); }
        if (TRIANGLE.triangle(1, 1, 2)) { System.exit(1); }
    }
}
