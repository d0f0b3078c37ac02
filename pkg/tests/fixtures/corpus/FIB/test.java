public class TEST_FIB {
    public static void main(String[] args) {
        if (FIB.fib(0) != 0) { System.exit(1); }
        if (FIB.fib(1) != 1) { System.exit(1); }
        if (FIB.fib(7) != 13) { System.exit(1); }
    }
}
