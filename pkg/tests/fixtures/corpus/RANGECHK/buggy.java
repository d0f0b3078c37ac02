public class RANGECHK {
    public static boolean rangechk(int value, int lo, int hi) {
        boolean inside = false;
        if (lo <= value && value < hi) {
            inside = true;
        }
        if (value == lo) {
            inside = true;
        }
        return inside;
    }
}
