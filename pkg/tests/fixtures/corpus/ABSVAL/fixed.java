public class ABSVAL {
    public static int absval(int value) {
        if (value < 0) {
            return -value;
        }
        return value;
    }
}
